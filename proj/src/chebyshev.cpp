#include "lms/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lms {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr std::size_t kMaxSimplexIterations = 100000;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Dense simplex tableau for  max c^T w  s.t.  A w = b, w >= 0.
class Tableau {
 public:
  Tableau(const Matrix& a, const Vector& b) : rows_(a.rows()), cols_(a.cols()) {
    // Artificial variables occupy the trailing columns and form the start basis.
    t_ = Matrix::Zero(rows_, cols_ + rows_ + 1);
    t_.leftCols(cols_) = a;
    t_.block(0, cols_, rows_, rows_).setIdentity();
    t_.col(cols_ + rows_) = b;
    basis_.resize(static_cast<std::size_t>(rows_));
    for (Eigen::Index r = 0; r < rows_; ++r) basis_[static_cast<std::size_t>(r)] = cols_ + r;
  }

  // Bland's rule: smallest entering index with positive reduced cost; among
  // tied ratios, the row whose basic variable has the smallest index leaves.
  std::size_t optimize(const Vector& cost, Eigen::Index usable_cols) {
    std::size_t iterations = 0;
    for (;; ++iterations) {
      if (iterations > kMaxSimplexIterations) {
        throw Error(ErrorCode::domain, "simplex iteration limit exceeded");
      }
      Vector cb(rows_);
      for (Eigen::Index r = 0; r < rows_; ++r) cb(r) = cost(basis_[static_cast<std::size_t>(r)]);
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < usable_cols; ++j) {
        if (is_basic(j)) continue;
        const double reduced = cost(j) - cb.dot(t_.col(j));
        if (reduced > kPivotEps) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return iterations;

      Eigen::Index leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows_; ++r) {
        const double coef = t_(r, entering);
        if (coef <= kPivotEps) continue;
        const double ratio = rhs(r) / coef;
        if (ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leaving)])) {
          best_ratio = std::min(best_ratio, ratio);
          leaving = r;
        }
      }
      if (leaving < 0) throw Error(ErrorCode::domain, "unbounded Chebyshev dual");
      pivot(leaving, entering);
    }
  }

  // Pivot artificial variables left at level zero out of the basis.
  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < cols_) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (!is_basic(j) && std::abs(t_(r, j)) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col < 0) throw Error(ErrorCode::degenerate_subset, "Chebyshev subproblem is rank deficient");
      pivot(r, col);
    }
  }

  const std::vector<Eigen::Index>& basis() const { return basis_; }

 private:
  double rhs(Eigen::Index r) const { return t_(r, cols_ + rows_); }

  bool is_basic(Eigen::Index j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  Eigen::Index rows_;
  Eigen::Index cols_;
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpSolution solve_minimax(const Dataset& data, const IndexSet& subset, double tolerance) {
  const std::size_t p = data.p();
  if (!subset.valid_for(data.n())) throw Error(ErrorCode::domain, "subset index out of range");
  if (subset.size() <= p) {
    throw Error(ErrorCode::underdetermined, "Chebyshev subproblem needs at least p+1 observations");
  }
  const Matrix xs = data.rows(subset);
  {
    Eigen::ColPivHouseholderQR<Matrix> qr(xs);
    qr.setThreshold(tolerance);
    if (static_cast<std::size_t>(qr.rank()) < p) {
      throw Error(ErrorCode::degenerate_subset, "rows of the subset do not have rank p");
    }
  }

  // Dual of  min rho  s.t.  rho - x_i^T theta >= -y_i,  rho + x_i^T theta >= y_i:
  //   max sum y_i (v_i - u_i)  s.t.  sum (u_i + v_i) = 1,  sum (v_i - u_i) x_i = 0.
  // Column 2j is u for the j-th member of the subset (eps = -1), 2j+1 is v.
  const auto m = idx(p + 1);
  const auto cols = idx(2 * subset.size());
  Matrix a(m, cols);
  Vector cost = Vector::Zero(cols + m);
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const auto xi = xs.row(idx(j)).transpose();
    const double yi = data.response(subset[j]);
    const auto u = idx(2 * j), v = idx(2 * j + 1);
    a(0, u) = 1.0;
    a(0, v) = 1.0;
    a.block(1, u, idx(p), 1) = -xi;
    a.block(1, v, idx(p), 1) = xi;
    cost(u) = -yi;
    cost(v) = yi;
  }
  Vector b = Vector::Zero(m);
  b(0) = 1.0;

  Tableau tableau(a, b);
  Vector phase_one = Vector::Zero(cols + m);
  phase_one.tail(m).setConstant(-1.0);
  std::size_t iterations = tableau.optimize(phase_one, cols + m);
  tableau.drive_out_artificials();
  iterations += tableau.optimize(cost, cols);

  // Recompute primal and dual values from the final basis for accuracy.
  Matrix basis_matrix(m, m);
  Vector basis_cost(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto col = tableau.basis()[static_cast<std::size_t>(r)];
    basis_matrix.col(r) = a.col(col);
    basis_cost(r) = cost(col);
  }
  Eigen::FullPivLU<Matrix> lu(basis_matrix);
  const Vector weights = lu.solve(b);
  const Vector dual = lu.transpose().solve(basis_cost);

  LpSolution sol;
  sol.rho = std::max(0.0, dual(0));
  sol.theta = dual.tail(idx(p));
  sol.iterations = iterations;

  struct Entry {
    std::size_t obs;
    int eps;
    double lambda;
  };
  std::vector<Entry> entries;
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto col = static_cast<std::size_t>(tableau.basis()[static_cast<std::size_t>(r)]);
    entries.push_back({subset[col / 2], col % 2 == 1 ? 1 : -1, std::max(0.0, weights(r))});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& l, const Entry& r) { return l.obs < r.obs; });
  std::vector<std::size_t> basis_idx;
  for (const auto& e : entries) {
    if (!basis_idx.empty() && basis_idx.back() == e.obs) {
      sol.basis_lambda.back() += e.lambda;
      continue;
    }
    basis_idx.push_back(e.obs);
    sol.basis_eps.push_back(e.eps);
    sol.basis_lambda.push_back(e.lambda);
  }
  sol.basis = IndexSet(std::move(basis_idx));

  std::vector<std::size_t> tight;
  for (std::size_t i : subset) {
    const double r = std::abs(data.response(i) - data.row(i).dot(sol.theta));
    if (r >= sol.rho - tolerance) tight.push_back(i);
  }
  sol.active = IndexSet(std::move(tight));
  return sol;
}

CandidateFit LpSolution::as_candidate(double tolerance) const {
  if (basis.size() != static_cast<std::size_t>(theta.size()) + 1) {
    throw Error(ErrorCode::degenerate_subset, "optimal basis does not name p+1 observations");
  }
  CandidateFit fit;
  fit.theta = theta;
  fit.rho = rho;
  fit.active = basis;
  fit.eps = basis_eps;
  fit.lambda = basis_lambda;
  fit.degenerate = std::any_of(fit.lambda.begin(), fit.lambda.end(),
                               [tolerance](double l) { return l <= tolerance; });
  return fit;
}

CandidateFit equioscillation_point(const Dataset& data, const IndexSet& subset,
                                   double tolerance) {
  const std::size_t p = data.p();
  if (subset.size() != p + 1) {
    throw Error(ErrorCode::domain, "equioscillation point needs exactly p+1 observations");
  }
  if (!subset.valid_for(data.n())) throw Error(ErrorCode::domain, "subset index out of range");

  // Columns are the vectors x_i of the subset; the last one is normalised.
  const Matrix columns = data.rows(subset).transpose();
  Vector t(idx(p + 1));
  const Matrix leading = columns.leftCols(idx(p));
  Eigen::FullPivLU<Matrix> lu(leading);
  lu.setThreshold(tolerance);
  if (lu.isInvertible()) {
    t.head(idx(p)) = lu.solve(-columns.col(idx(p)));
    t(idx(p)) = 1.0;
  } else {
    // The last vector is not needed to reach rank p, so its coefficient in the
    // one-dimensional kernel is zero.
    Eigen::FullPivLU<Matrix> full(columns);
    full.setThreshold(tolerance);
    if (static_cast<std::size_t>(full.rank()) < p) {
      throw Error(ErrorCode::degenerate_subset, "rows of the subset do not have rank p");
    }
    t = full.kernel().col(0);
    t /= t.cwiseAbs().maxCoeff();
  }

  CandidateFit fit;
  fit.active = subset;
  fit.eps.resize(p + 1);
  fit.lambda.resize(p + 1);
  const double norm = t.cwiseAbs().sum();
  for (std::size_t i = 0; i <= p; ++i) {
    const double ti = t(idx(i));
    fit.eps[i] = ti < 0.0 ? -1 : 1;
    fit.lambda[i] = std::abs(ti) / norm;
    if (std::abs(ti) < tolerance) fit.degenerate = true;
  }

  // Active hyperplanes: rho + eps_i x_i^T theta = eps_i y_i.
  Matrix system(idx(p + 1), idx(p + 1));
  Vector rhs(idx(p + 1));
  for (std::size_t i = 0; i <= p; ++i) {
    system(idx(i), 0) = 1.0;
    system.block(idx(i), 1, 1, idx(p)) = fit.eps[i] * columns.col(idx(i)).transpose();
    rhs(idx(i)) = fit.eps[i] * data.response(subset[i]);
  }
  Eigen::FullPivLU<Matrix> hyper(system);
  if (!hyper.isInvertible()) {
    throw Error(ErrorCode::degenerate_subset, "active hyperplanes do not intersect in a point");
  }
  const Vector solution = hyper.solve(rhs);
  fit.rho = solution(0);
  fit.theta = solution.tail(idx(p));
  if (fit.rho < 0.0) {
    fit.rho = -fit.rho;
    for (auto& e : fit.eps) e = -e;
  }
  return fit;
}

OptimalityResiduals optimality_residuals(const Dataset& data, const CandidateFit& fit) {
  OptimalityResiduals out;
  const std::size_t p = data.p();
  double sum = 0.0;
  Vector stationary = Vector::Zero(idx(p));
  out.min_lambda = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < fit.active.size(); ++j) {
    const auto i = fit.active[j];
    sum += fit.lambda[j];
    out.min_lambda = std::min(out.min_lambda, fit.lambda[j]);
    stationary += fit.lambda[j] * fit.eps[j] * data.row(i).transpose();
    const double r = data.response(i) - data.row(i).dot(fit.theta);
    out.equioscillation = std::max(out.equioscillation, std::abs(fit.eps[j] * r - fit.rho));
  }
  out.multiplier_sum = std::abs(sum - 1.0);
  out.stationarity = stationary.cwiseAbs().maxCoeff();
  return out;
}

bool check_optimality(const Dataset& data, const CandidateFit& fit, Strictness strictness,
                      double tolerance) {
  const std::size_t p = data.p();
  if (static_cast<std::size_t>(fit.theta.size()) != p || fit.active.size() != p + 1 ||
      fit.eps.size() != p + 1 || fit.lambda.size() != p + 1 || !fit.active.valid_for(data.n())) {
    return false;
  }
  if (!fit.theta.allFinite() || !std::isfinite(fit.rho) || fit.rho < -tolerance) return false;
  for (std::size_t j = 0; j <= p; ++j) {
    if (fit.eps[j] != 1 && fit.eps[j] != -1) return false;
    if (!std::isfinite(fit.lambda[j])) return false;
  }
  const auto res = optimality_residuals(data, fit);
  const double lambda_floor = strictness == Strictness::strict ? tolerance : -tolerance;
  if (strictness == Strictness::strict ? res.min_lambda <= lambda_floor
                                       : res.min_lambda < lambda_floor) {
    return false;
  }
  return res.multiplier_sum <= tolerance && res.stationarity <= tolerance &&
         res.equioscillation <= tolerance;
}

}  // namespace lms

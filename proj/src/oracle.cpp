#include "lms/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

namespace lms::oracle {
namespace {

double sorted_order_stat(std::vector<double> values, std::size_t k) {
  std::sort(values.begin(), values.end());
  return values[k - 1];
}

double fk_by_sorting(const Dataset& data, const Vector& theta, std::size_t k) {
  std::vector<double> r(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    r[i] = std::abs(data.response(i) - data.row(i).dot(theta));
  }
  return sorted_order_stat(std::move(r), data.n() - k);
}

void for_each_subset(std::size_t n, std::size_t size,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (chosen.size() == size) {
      visit(chosen);
      return;
    }
    for (std::size_t i = next; i + (size - chosen.size()) <= n; ++i) {
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

}  // namespace

double brute_force_order_stat(std::span<const double> values, std::size_t k) {
  if (values.size() > 12) throw Error(ErrorCode::guard, "order-statistic oracle limited to 12 values");
  if (k < 1 || k > values.size()) throw Error(ErrorCode::domain, "rank outside [1, n]");
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t n = static_cast<std::uint32_t>(values.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    double subset_max = -std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) subset_max = std::max(subset_max, values[i]);
    }
    best = std::min(best, subset_max);
  }
  return best;
}

SolverReport brute_force_lms(const Dataset& data, std::optional<std::size_t> k, double tolerance) {
  const std::size_t n = data.n(), p = data.p();
  const std::size_t drop = k ? *k : n - (n / 2 + 1);
  if (drop > n - (p + 1)) throw Error(ErrorCode::domain, "drop count outside [0, n-(p+1)]");
  double subsets = 1.0;
  for (std::size_t i = 0; i < p + 1; ++i) {
    subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (subsets > 1e6 + 0.5) throw Error(ErrorCode::guard, "brute force limited to 10^6 subsets");

  const auto dim = static_cast<Eigen::Index>(p + 1);
  SolverReport report;
  report.value = std::numeric_limits<double>::infinity();
  std::vector<CandidateFit> points;
  std::vector<double> values;

  for_each_subset(n, p + 1, [&](const std::vector<std::size_t>& subset) {
    for (std::uint32_t pattern = 0; pattern < (1u << p); ++pattern) {
      std::vector<int> eps(p + 1, 1);
      for (std::size_t j = 1; j <= p; ++j) eps[j] = (pattern >> (j - 1)) & 1u ? -1 : 1;

      // Multipliers: sum lambda_j eps_j x_j = 0, sum lambda_j = 1.
      Matrix mult(dim, dim);
      Vector unit = Vector::Zero(dim);
      unit(static_cast<Eigen::Index>(p)) = 1.0;
      for (std::size_t j = 0; j <= p; ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        mult.block(0, col, static_cast<Eigen::Index>(p), 1) =
            eps[j] * data.row(subset[j]).transpose();
        mult(static_cast<Eigen::Index>(p), col) = 1.0;
      }
      Eigen::ColPivHouseholderQR<Matrix> mqr(mult);
      if (!mqr.isInvertible()) continue;
      const Vector lambda = mqr.solve(unit);
      if (lambda.minCoeff() < -tolerance) continue;

      Matrix planes(dim, dim);
      Vector rhs(dim);
      for (std::size_t j = 0; j <= p; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        planes(row, 0) = 1.0;
        planes.block(row, 1, 1, static_cast<Eigen::Index>(p)) = eps[j] * data.row(subset[j]);
        rhs(row) = eps[j] * data.response(subset[j]);
      }
      Eigen::ColPivHouseholderQR<Matrix> pqr(planes);
      if (!pqr.isInvertible()) continue;
      const Vector sol = pqr.solve(rhs);

      CandidateFit fit;
      fit.theta = sol.tail(static_cast<Eigen::Index>(p));
      fit.rho = sol(0);
      fit.active = IndexSet(subset);
      fit.eps = eps;
      if (fit.rho < 0.0) {
        fit.rho = -fit.rho;
        for (auto& e : fit.eps) e = -e;
      }
      fit.lambda.assign(lambda.data(), lambda.data() + lambda.size());
      fit.degenerate = lambda.minCoeff() <= tolerance;
      ++report.subproblems_solved;
      const double value = fk_by_sorting(data, fit.theta, drop);
      report.value = std::min(report.value, value);
      points.push_back(std::move(fit));
      values.push_back(value);
    }
  });
  report.candidates_examined = points.size();
  if (points.empty()) throw Error(ErrorCode::no_candidate, "no vertex found");

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (values[i] > report.value + tolerance) continue;
    const bool duplicate = std::any_of(
        report.optimizers.begin(), report.optimizers.end(), [&](const CandidateFit& f) {
          return (f.theta - points[i].theta).cwiseAbs().maxCoeff() <= tolerance;
        });
    if (!duplicate) report.optimizers.push_back(points[i]);
  }
  return report;
}

bool grid_probe_local_min(const Dataset& data, const Vector& theta, std::size_t k, double radius,
                          std::size_t samples, double tolerance) {
  const std::size_t p = data.p();
  if (p > 2) throw Error(ErrorCode::guard, "grid probe limited to p <= 2");
  if (!(radius > 0.0) || samples < 2) throw Error(ErrorCode::domain, "grid needs radius > 0 and 2+ samples");
  if (k > data.n() - (p + 1)) throw Error(ErrorCode::domain, "drop count outside [0, n-(p+1)]");

  const double centre = fk_by_sorting(data, theta, k);
  const double step = 2.0 * radius / static_cast<double>(samples - 1);
  const std::size_t second = p == 2 ? samples : 1;
  for (std::size_t a = 0; a < samples; ++a) {
    for (std::size_t b = 0; b < second; ++b) {
      Vector probe = theta;
      probe(0) += -radius + step * static_cast<double>(a);
      if (p == 2) probe(1) += -radius + step * static_cast<double>(b);
      if (centre > fk_by_sorting(data, probe, k) + tolerance) return false;
    }
  }
  return true;
}

}  // namespace lms::oracle

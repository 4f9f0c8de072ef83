#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lms {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance shared by every equality-within-tolerance check.
inline constexpr double kDefaultTolerance = 1e-9;

enum class ErrorCode {
  domain,             // argument outside the operation's domain
  dimension_mismatch,
  invalid_dataset,    // shape or rank invariant of Dataset violated
  degenerate_subset,  // rows indexed by a subset do not have rank p
  underdetermined,    // subset too small for the subproblem
  overflow,
  classification_unavailable,
  no_candidate,
  guard,              // size guard refused the request
  parse,              // malformed input text
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Strictly increasing set of observation indices. Stored zero-based;
/// one_based() is the form used in every report.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<std::size_t> indices);
  IndexSet(std::initializer_list<std::size_t> indices)
      : IndexSet(std::vector<std::size_t>(indices)) {}

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t operator[](std::size_t pos) const { return indices_[pos]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  bool contains(std::size_t index) const;
  IndexSet without(std::size_t index) const;
  std::vector<std::size_t> one_based() const;

  /// Every member is < n.
  bool valid_for(std::size_t n) const noexcept;

  static IndexSet all(std::size_t n);

  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;
  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// Observations (x_i, y_i), i = 1..n, of a p-parameter linear model.
/// Immutable once constructed. Construction enforces n >= p+1 and rank(X) = p;
/// the LMS solvers additionally call require_lms_shape() for n >= 2p.
class Dataset {
 public:
  Dataset(Matrix x, Vector y, double rank_tolerance = kDefaultTolerance);

  std::size_t n() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(x_.cols()); }
  const Matrix& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  auto row(std::size_t i) const { return x_.row(static_cast<Eigen::Index>(i)); }
  double response(std::size_t i) const { return y_(static_cast<Eigen::Index>(i)); }

  /// Rows of X restricted to `rows`.
  Matrix rows(const IndexSet& rows) const;

  /// Throws invalid_dataset unless n/2 >= p.
  void require_lms_shape() const;

  /// Median rank h = floor(n/2) + 1.
  std::size_t median_rank() const noexcept { return n() / 2 + 1; }
  /// Drop count giving the LMS objective: n - h = floor((n-1)/2).
  std::size_t lms_drop_count() const noexcept { return n() - median_rank(); }
  /// Largest admissible drop count n - (p+1).
  std::size_t max_drop_count() const noexcept { return n() - (p() + 1); }

  /// Zero-based columns that are linear combinations of earlier columns.
  static std::vector<std::size_t> dependent_columns(const Matrix& x,
                                                    double tolerance = kDefaultTolerance);

 private:
  Matrix x_;
  Vector y_;
};

/// Candidate point determined by a (p+1)-subset: the common level rho of the
/// active residuals, their signs and the convex multipliers.
struct CandidateFit {
  Vector theta;
  double rho = 0.0;
  IndexSet active;
  std::vector<int> eps;
  std::vector<double> lambda;
  bool degenerate = false;
};

struct LocalMinimumRecord {
  std::size_t k = 0;
  CandidateFit fit;
  double value = 0.0;
};

struct TraceStep {
  IndexSet subset;
  Vector theta;
  double value = 0.0;
};

struct SolverReport {
  std::vector<CandidateFit> optimizers;
  double value = 0.0;
  std::size_t subproblems_solved = 0;
  std::size_t candidates_examined = 0;
  std::vector<TraceStep> trace;
  std::vector<std::string> warnings;
};

/// k-th smallest element (1-based k), duplicates counted repeatedly.
double kth_smallest(std::span<const double> values, std::size_t k);

/// r_(h) with h = floor(n/2) + 1; for even n this is the upper middle value.
double median_h(std::span<const double> values);

std::vector<double> abs_residuals(const Dataset& data, const Vector& theta);

/// f_k(theta): the (n-k)-th smallest absolute residual, 0 <= k <= n-(p+1).
double objective_fk(const Dataset& data, const Vector& theta, std::size_t k);

/// F(theta): the h-th smallest absolute residual (f_k with k = n-h).
double objective_lms(const Dataset& data, const Vector& theta);

}  // namespace lms

#pragma once

#include <cstdint>
#include <optional>

#include "lms/chebyshev.hpp"
#include "lms/core.hpp"

namespace lms {

struct SolveOptions {
  /// Drop count of the objective f_k; unset means the LMS value n - h.
  std::optional<std::size_t> k;
  double tolerance = kDefaultTolerance;
  int threads = 1;
  /// Lifts the dimension guard of the exhaustive search (p > 8).
  bool force_large = false;
};

/// C(p+k, p), the number of local minima of f_k. Exact; throws overflow
/// instead of wrapping.
std::uint64_t count_local_minima_theory(std::size_t p, std::size_t k);

/// Exact binomial coefficient with overflow detection.
std::uint64_t binomial(std::size_t n, std::size_t r);

/// Number of observations outside fit.active with |r_i| < rho - tolerance.
std::size_t count_insiders(const Dataset& data, const CandidateFit& fit,
                           double tolerance = kDefaultTolerance);

/// Whether the acute vertex `fit` is a local minimum of f_k: exactly
/// n - k - (p+1) other residuals lie strictly inside the level rho.
bool is_local_min(const Dataset& data, const CandidateFit& fit, std::size_t k,
                  double tolerance = kDefaultTolerance);

/// Candidate point of one (p+1)-subset with its classification data.
struct SubsetCandidate {
  IndexSet subset;
  std::optional<CandidateFit> fit;  // empty when the subset is rank deficient
  std::size_t insiders = 0;
  bool boundary_tie = false;        // a non-active residual sits on the level rho
};

/// All C(n, p+1) subsets in lexicographic order.
std::vector<IndexSet> all_subsets(std::size_t n, std::size_t size);

/// Candidate construction for every (p+1)-subset. The parallel kernel and the
/// serial reference return identical vectors.
std::vector<SubsetCandidate> build_candidates(const Dataset& data, double tolerance, int threads);
std::vector<SubsetCandidate> build_candidates_serial(const Dataset& data, double tolerance);

struct Enumeration {
  std::vector<LocalMinimumRecord> minima;
  std::vector<std::string> warnings;
};

/// Every local minimum of f_k, sorted by value then active set.
Enumeration enumerate_local_minima(const Dataset& data, std::size_t k,
                                   double tolerance = kDefaultTolerance, int threads = 1);

/// Measured M_k for k = 0..n-(p+1) from a single pass over all subsets.
struct MinimaCounts {
  std::vector<std::uint64_t> counts;
  std::vector<std::string> warnings;
  bool general_position() const { return warnings.empty(); }
};
MinimaCounts measure_local_minima_counts(const Dataset& data,
                                         double tolerance = kDefaultTolerance, int threads = 1);

/// Both sides of  sum_j 2^(n-(p+1)-j) M_j = sum_j C(n, j),  j = 0..n-(p+1).
struct CountingIdentity {
  std::uint64_t weighted_minima = 0;
  std::uint64_t subproblems = 0;
  bool holds() const { return weighted_minima == subproblems; }
};
CountingIdentity counting_identity(std::size_t n, std::size_t p,
                                   const std::vector<std::uint64_t>& measured);

/// Warnings describing why `data` is not in general position (empty if it is).
std::vector<std::string> general_position_issues(const Dataset& data,
                                                 double tolerance = kDefaultTolerance);

/// Sequential removal heuristic: from P(N), repeatedly drop the basis index
/// whose removal gives the lowest Chebyshev level, k times.
SolverReport greedy_solve(const Dataset& data, const SolveOptions& options = {});

/// Exact minimiser of f_k by depth-first search over removals of basis
/// indices, memoised on the removed set.
SolverReport exhaustive_solve(const Dataset& data, const SolveOptions& options = {});

/// Breakpoints of F on a line (p = 1) and the value of F at each; F is linear
/// between consecutive entries.
struct ProfilePoint {
  double theta;
  double value;
};
std::vector<ProfilePoint> lms_profile(const Dataset& data, std::optional<std::size_t> k = {});

/// Interior profile vertices lower than both neighbours.
std::vector<double> profile_local_minimizers(const std::vector<ProfilePoint>& profile,
                                             double tolerance = kDefaultTolerance);

/// Resolved drop count for `options`, validated against the dataset.
std::size_t resolve_drop_count(const Dataset& data, const SolveOptions& options);

}  // namespace lms

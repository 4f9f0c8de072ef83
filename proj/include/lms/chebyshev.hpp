#pragma once

#include "lms/core.hpp"

namespace lms {

/// Solution of the l-infinity subproblem over an index subset I:
///   minimize rho  subject to  |y_i - x_i^T theta| <= rho,  i in I.
struct LpSolution {
  Vector theta;
  double rho = 0.0;
  /// Indices of I whose constraint is tight within tolerance.
  IndexSet active;
  /// The p+1 observations of the optimal basis, with the sign of their
  /// residual and their multiplier in the dual (sum lambda = 1).
  IndexSet basis;
  std::vector<int> basis_eps;
  std::vector<double> basis_lambda;
  std::size_t iterations = 0;

  /// The basis recast as a candidate point. Throws degenerate_subset when the
  /// basis does not name p+1 distinct observations.
  CandidateFit as_candidate(double tolerance = kDefaultTolerance) const;
};

/// Chebyshev fit over `subset` by a dense two-phase simplex on the dual of the
/// LP form, with Bland's rule so the result is deterministic.
LpSolution solve_minimax(const Dataset& data, const IndexSet& subset,
                         double tolerance = kDefaultTolerance);

/// The unique point where the p+1 residuals of `subset` reach a common level
/// rho with signs eps and multipliers lambda satisfying
/// sum lambda_i eps_i x_i = 0. The member with the largest index takes the
/// role of the normalised vector (t = 1).
CandidateFit equioscillation_point(const Dataset& data, const IndexSet& subset,
                                   double tolerance = kDefaultTolerance);

enum class Strictness {
  plain,   // lambda_i >= 0
  strict,  // lambda_i > tolerance: the vertex is an acute top
};

/// Stationarity of `fit`: multipliers on the simplex, sum lambda eps x = 0, and
/// every active residual equal to eps_i * rho. Malformed fits give false.
bool check_optimality(const Dataset& data, const CandidateFit& fit,
                      Strictness strictness = Strictness::plain,
                      double tolerance = kDefaultTolerance);

/// Worst violation of the stationarity equalities; used in reports and tests.
struct OptimalityResiduals {
  double multiplier_sum = 0.0;   // |sum lambda - 1|
  double stationarity = 0.0;     // ||sum lambda eps x||_inf
  double equioscillation = 0.0;  // max |eps_i r_i - rho|
  double min_lambda = 0.0;
};
OptimalityResiduals optimality_residuals(const Dataset& data, const CandidateFit& fit);

}  // namespace lms

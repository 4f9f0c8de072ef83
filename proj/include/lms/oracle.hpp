#pragma once

// Brute-force references for tests. They share no code path with the solvers
// beyond the Dataset container and are deliberately slow.

#include <optional>

#include "lms/core.hpp"

namespace lms::oracle {

/// min over all k-subsets of the subset maximum; refuses more than 12 values.
double brute_force_order_stat(std::span<const double> values, std::size_t k);

/// Global minimiser of f_k (default: the LMS objective) over the vertices of
/// every (p+1)-subset, found by trying each sign pattern of the active
/// hyperplanes and keeping those with nonnegative multipliers.
/// Refuses instances with C(n, p+1) > 10^6.
SolverReport brute_force_lms(const Dataset& data, std::optional<std::size_t> k = {},
                             double tolerance = kDefaultTolerance);

/// f_k(theta) <= f_k(theta') + tolerance for every theta' on a regular grid of
/// `samples` points per axis spanning theta +- radius. Needs p <= 2.
bool grid_probe_local_min(const Dataset& data, const Vector& theta, std::size_t k, double radius,
                          std::size_t samples, double tolerance = kDefaultTolerance);

}  // namespace lms::oracle

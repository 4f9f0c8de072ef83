#pragma once

#include <cstdint>

#include "lms/core.hpp"
#include "lms/search.hpp"

namespace lms {

/// Branch and probability bound random search over (p+1)-subsets.
///
/// Branch b holds the subsets containing observation b. Every round each
/// surviving branch draws `branch_factor` subsets (b plus p others drawn
/// uniformly without replacement from the other surviving branches; in the
/// first round that is all of N) and scores each by f_k at its
/// equioscillation point. A branch's statistic is the best value it has
/// produced so far. After the round, branches whose statistic lies above the
/// empirical `retention_quantile` of the surviving statistics are pruned, never
/// below p+1 survivors. Sampling stops once `iterations` subsets have been
/// drawn.
///
/// Branch b in round r draws from its own stream seeded by
/// Rng::derive(seed, b, r), so serial and multi-threaded runs agree exactly.
struct BpbConfig {
  std::uint64_t seed = 0;
  std::size_t iterations = 1000;
  std::size_t branch_factor = 4;
  double retention_quantile = 0.5;

  void validate() const;
};

SolverReport bpb_solve(const Dataset& data, const BpbConfig& config,
                       const SolveOptions& options = {});

}  // namespace lms

#include "lms/bpb.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lms/chebyshev.hpp"
#include "lms/random.hpp"

namespace lms {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sample {
  std::optional<CandidateFit> fit;
  double value = kInf;
};

// Companions come from the surviving branches, so later rounds concentrate on
// observations that have produced good candidates.
std::vector<Sample> draw_branch(const Dataset& data, std::size_t branch,
                                const std::vector<std::size_t>& alive, std::size_t count,
                                std::uint64_t stream_seed, std::size_t k, double tol) {
  Rng rng(stream_seed);
  std::vector<std::size_t> pool;
  pool.reserve(alive.size());
  for (auto i : alive) {
    if (i != branch) pool.push_back(i);
  }
  std::vector<Sample> out(count);
  for (auto& s : out) {
    auto members = rng.sample(pool, data.p());
    members.push_back(branch);
    std::sort(members.begin(), members.end());
    try {
      auto fit = equioscillation_point(data, IndexSet(std::move(members)), tol);
      if (fit.degenerate || !check_optimality(data, fit, Strictness::strict, tol)) continue;
      s.value = objective_fk(data, fit.theta, k);
      s.fit = std::move(fit);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_subset) throw;
    }
  }
  return out;
}

bool better(double value, const CandidateFit& fit, double best_value, const CandidateFit* best) {
  if (!best) return true;
  if (value != best_value) return value < best_value;
  return fit.active < best->active;
}

}  // namespace

void BpbConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::domain, "BPB needs at least one iteration");
  if (branch_factor < 1) throw Error(ErrorCode::domain, "BPB branch factor must be positive");
  if (!(retention_quantile > 0.0 && retention_quantile < 1.0)) {
    throw Error(ErrorCode::domain, "BPB retention quantile must lie in (0, 1)");
  }
}

SolverReport bpb_solve(const Dataset& data, const BpbConfig& config, const SolveOptions& options) {
  config.validate();
  const std::size_t k = resolve_drop_count(data, options);
  const double tol = options.tolerance;
  const std::size_t n = data.n();
  const std::size_t p = data.p();

  std::vector<std::size_t> alive(n);
  for (std::size_t i = 0; i < n; ++i) alive[i] = i;
  std::vector<double> statistic(n, kInf);

  SolverReport report;
  std::optional<CandidateFit> best;
  double best_value = kInf;
  std::size_t remaining = config.iterations;

  for (std::size_t round = 0; remaining > 0; ++round) {
    std::vector<std::size_t> quota(alive.size(), 0);
    for (std::size_t a = 0; a < alive.size() && remaining > 0; ++a) {
      quota[a] = std::min(config.branch_factor, remaining);
      remaining -= quota[a];
    }

    std::vector<std::vector<Sample>> drawn(alive.size());
    const auto branches = static_cast<std::ptrdiff_t>(alive.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, options.threads))
    for (std::ptrdiff_t a = 0; a < branches; ++a) {
      const auto u = static_cast<std::size_t>(a);
      if (quota[u] == 0) continue;
      drawn[u] = draw_branch(data, alive[u], alive, quota[u], Rng::derive(config.seed, alive[u], round),
                             k, tol);
    }

    for (std::size_t a = 0; a < alive.size(); ++a) {
      report.subproblems_solved += quota[a];
      for (auto& s : drawn[a]) {
        if (!s.fit) continue;
        ++report.candidates_examined;
        statistic[alive[a]] = std::min(statistic[alive[a]], s.value);
        if (better(s.value, *s.fit, best_value, best ? &*best : nullptr)) {
          best_value = s.value;
          best = std::move(s.fit);
        }
      }
    }
    if (best) report.trace.push_back({best->active, best->theta, best_value});

    // At least p+1 branches survive so that companions can still be drawn.
    if (alive.size() > p + 1) {
      std::vector<double> scores;
      for (auto b : alive) scores.push_back(statistic[b]);
      std::sort(scores.begin(), scores.end());
      const auto rank = static_cast<std::size_t>(
          std::ceil(config.retention_quantile * static_cast<double>(scores.size())));
      const double threshold = scores[std::clamp<std::size_t>(rank, p + 1, scores.size()) - 1];
      std::erase_if(alive, [&](std::size_t b) { return statistic[b] > threshold; });
    }
  }

  if (!best) throw Error(ErrorCode::no_candidate, "every sampled subset was degenerate");
  report.value = best_value;
  report.optimizers.push_back(std::move(*best));
  return report;
}

}  // namespace lms

#include "lms/search.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace lms {
namespace {

std::string describe(const IndexSet& s) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (auto i : s.one_based()) {
    out << (first ? "" : ",") << i;
    first = false;
  }
  out << '}';
  return out.str();
}

bool acute(const Dataset& data, const CandidateFit& fit, double tolerance) {
  return !fit.degenerate && check_optimality(data, fit, Strictness::strict, tolerance);
}

SubsetCandidate classify_subset(const Dataset& data, IndexSet subset, double tolerance) {
  SubsetCandidate c;
  c.subset = std::move(subset);
  try {
    c.fit = equioscillation_point(data, c.subset, tolerance);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::degenerate_subset) throw;
    return c;
  }
  const auto r = abs_residuals(data, c.fit->theta);
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (c.subset.contains(i)) continue;
    if (r[i] < c.fit->rho - tolerance) {
      ++c.insiders;
    } else if (r[i] <= c.fit->rho + tolerance) {
      c.boundary_tie = true;
    }
  }
  return c;
}

void collect_issues(const Dataset& data, const SubsetCandidate& c, double tolerance,
                    std::vector<std::string>& warnings) {
  if (!c.fit) {
    warnings.push_back("subset " + describe(c.subset) + " is rank deficient");
  } else if (!acute(data, *c.fit, tolerance)) {
    warnings.push_back("subset " + describe(c.subset) + " has a vanishing multiplier");
  } else if (c.boundary_tie) {
    warnings.push_back("subset " + describe(c.subset) +
                       ": another residual lies on the equioscillation level");
  }
}

std::size_t k_for_insiders(const Dataset& data, std::size_t insiders) {
  return data.max_drop_count() - insiders;
}

}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 result = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    // result holds C(n - r + i - 1, i - 1); the product is exact in 128 bits.
    result = result * (n - r + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorCode::overflow, "binomial coefficient C(" + std::to_string(n) + ", " +
                                           std::to_string(r) + ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t count_local_minima_theory(std::size_t p, std::size_t k) {
  if (p < 1) throw Error(ErrorCode::domain, "model dimension p must be at least 1");
  if (k > std::numeric_limits<std::size_t>::max() - p) {
    throw Error(ErrorCode::overflow, "p + k overflows");
  }
  return binomial(p + k, p);
}

std::size_t count_insiders(const Dataset& data, const CandidateFit& fit, double tolerance) {
  const auto r = abs_residuals(data, fit.theta);
  std::size_t insiders = 0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (!fit.active.contains(i) && r[i] < fit.rho - tolerance) ++insiders;
  }
  return insiders;
}

bool is_local_min(const Dataset& data, const CandidateFit& fit, std::size_t k, double tolerance) {
  if (k > data.max_drop_count()) {
    throw Error(ErrorCode::domain, "drop count k outside [0, n-(p+1)]");
  }
  if (!acute(data, fit, tolerance)) {
    throw Error(ErrorCode::classification_unavailable,
                "candidate is not an acute equioscillation point");
  }
  return count_insiders(data, fit, tolerance) == data.n() - k - (data.p() + 1);
}

std::vector<IndexSet> all_subsets(std::size_t n, std::size_t size) {
  std::vector<IndexSet> out;
  if (size > n) return out;
  std::vector<std::size_t> current(size);
  for (std::size_t i = 0; i < size; ++i) current[i] = i;
  for (;;) {
    out.emplace_back(current);
    std::size_t pos = size;
    while (pos > 0 && current[pos - 1] == n - size + pos - 1) --pos;
    if (pos == 0) break;
    ++current[pos - 1];
    for (std::size_t j = pos; j < size; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::vector<SubsetCandidate> build_candidates_serial(const Dataset& data, double tolerance) {
  auto subsets = all_subsets(data.n(), data.p() + 1);
  std::vector<SubsetCandidate> out;
  out.reserve(subsets.size());
  for (auto& s : subsets) out.push_back(classify_subset(data, std::move(s), tolerance));
  return out;
}

std::vector<SubsetCandidate> build_candidates(const Dataset& data, double tolerance, int threads) {
  if (threads <= 1) return build_candidates_serial(data, tolerance);
  const auto subsets = all_subsets(data.n(), data.p() + 1);
  std::vector<SubsetCandidate> out(subsets.size());
  const auto count = static_cast<std::ptrdiff_t>(subsets.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = classify_subset(data, subsets[u], tolerance);
  }
  return out;
}

Enumeration enumerate_local_minima(const Dataset& data, std::size_t k, double tolerance,
                                   int threads) {
  if (k > data.max_drop_count()) {
    throw Error(ErrorCode::domain, "drop count k outside [0, n-(p+1)]");
  }
  Enumeration result;
  for (const auto& c : build_candidates(data, tolerance, threads)) {
    collect_issues(data, c, tolerance, result.warnings);
    if (!c.fit || !acute(data, *c.fit, tolerance)) continue;
    if (k_for_insiders(data, c.insiders) != k || c.insiders > data.max_drop_count()) continue;
    result.minima.push_back({k, *c.fit, objective_fk(data, c.fit->theta, k)});
  }
  std::sort(result.minima.begin(), result.minima.end(),
            [](const LocalMinimumRecord& l, const LocalMinimumRecord& r) {
              if (l.value != r.value) return l.value < r.value;
              return l.fit.active < r.fit.active;
            });
  return result;
}

MinimaCounts measure_local_minima_counts(const Dataset& data, double tolerance, int threads) {
  MinimaCounts out;
  out.counts.assign(data.max_drop_count() + 1, 0);
  for (const auto& c : build_candidates(data, tolerance, threads)) {
    collect_issues(data, c, tolerance, out.warnings);
    if (!c.fit || !acute(data, *c.fit, tolerance)) continue;
    ++out.counts[k_for_insiders(data, c.insiders)];
  }
  return out;
}

CountingIdentity counting_identity(std::size_t n, std::size_t p,
                                   const std::vector<std::uint64_t>& measured) {
  if (n < p + 1 || measured.size() != n - p) {
    throw Error(ErrorCode::domain, "need one measured count per k = 0..n-(p+1)");
  }
  const std::size_t top = n - (p + 1);
  if (top >= 64) throw Error(ErrorCode::overflow, "2^(n-(p+1)) exceeds 64 bits");
  CountingIdentity id;
  auto checked_add = [](std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
      throw Error(ErrorCode::overflow, "counting identity sum exceeds 64 bits");
    }
    return a + b;
  };
  for (std::size_t j = 0; j <= top; ++j) {
    const std::uint64_t weight = std::uint64_t{1} << (top - j);
    if (measured[j] != 0 && weight > std::numeric_limits<std::uint64_t>::max() / measured[j]) {
      throw Error(ErrorCode::overflow, "counting identity term exceeds 64 bits");
    }
    id.weighted_minima = checked_add(id.weighted_minima, weight * measured[j]);
    id.subproblems = checked_add(id.subproblems, binomial(n, j));
  }
  return id;
}

std::vector<std::string> general_position_issues(const Dataset& data, double tolerance) {
  std::vector<std::string> issues;
  for (const auto& c : build_candidates_serial(data, tolerance)) {
    collect_issues(data, c, tolerance, issues);
  }
  return issues;
}

std::size_t resolve_drop_count(const Dataset& data, const SolveOptions& options) {
  if (options.k) {
    if (*options.k > data.max_drop_count()) {
      throw Error(ErrorCode::domain, "drop count k=" + std::to_string(*options.k) +
                                         " outside [0, " +
                                         std::to_string(data.max_drop_count()) + "]");
    }
    return *options.k;
  }
  data.require_lms_shape();
  return data.lms_drop_count();
}

SolverReport greedy_solve(const Dataset& data, const SolveOptions& options) {
  const std::size_t k = resolve_drop_count(data, options);
  const double tol = options.tolerance;
  SolverReport report;
  std::set<IndexSet> points;

  IndexSet current = IndexSet::all(data.n());
  LpSolution sol = solve_minimax(data, current, tol);
  ++report.subproblems_solved;
  points.insert(sol.basis);
  report.trace.push_back({current, sol.theta, sol.rho});

  for (std::size_t step = 0; step < k; ++step) {
    std::optional<std::pair<std::size_t, LpSolution>> best;
    for (auto i : sol.basis) {
      LpSolution candidate;
      try {
        candidate = solve_minimax(data, current.without(i), tol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate_subset) throw;
        report.warnings.push_back("removing observation " + std::to_string(i + 1) +
                                  " leaves a rank-deficient subproblem");
        continue;
      }
      ++report.subproblems_solved;
      points.insert(candidate.basis);
      // Basis indices ascend, so an equal level keeps the smaller index.
      if (!best || candidate.rho < best->second.rho - tol) best.emplace(i, std::move(candidate));
    }
    if (!best) throw Error(ErrorCode::degenerate_subset, "no admissible removal in greedy step");
    current = current.without(best->first);
    sol = std::move(best->second);
    report.trace.push_back({current, sol.theta, sol.rho});
  }

  report.candidates_examined = points.size();
  report.value = objective_fk(data, sol.theta, k);
  report.optimizers.push_back(sol.as_candidate(tol));
  return report;
}

SolverReport exhaustive_solve(const Dataset& data, const SolveOptions& options) {
  if (data.p() > 8 && !options.force_large) {
    throw Error(ErrorCode::guard, "exhaustive search refuses p > 8 without force_large");
  }
  const std::size_t k = resolve_drop_count(data, options);
  const double tol = options.tolerance;

  SolverReport report;
  std::set<IndexSet> visited;
  std::set<IndexSet> points;
  struct Leaf {
    LpSolution sol;
    double value;
  };
  std::vector<Leaf> leaves;
  double incumbent = std::numeric_limits<double>::infinity();

  auto dfs = [&](auto&& self, const IndexSet& subset, std::size_t depth) -> void {
    if (!visited.insert(subset).second) return;
    LpSolution sol;
    try {
      sol = solve_minimax(data, subset, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_subset) throw;
      report.warnings.push_back("subproblem over " + describe(subset) + " is rank deficient");
      return;
    }
    ++report.subproblems_solved;
    points.insert(sol.basis);
    if (depth == k) {
      const double value = objective_fk(data, sol.theta, k);
      if (value < incumbent) {
        incumbent = value;
        report.trace.push_back({subset, sol.theta, value});
      }
      leaves.push_back({std::move(sol), value});
      return;
    }
    for (auto i : sol.basis) self(self, subset.without(i), depth + 1);
  };
  dfs(dfs, IndexSet::all(data.n()), 0);

  if (leaves.empty()) throw Error(ErrorCode::no_candidate, "no admissible subproblem at full depth");
  report.value = incumbent;
  report.candidates_examined = points.size();

  std::set<IndexSet> seen;
  for (const auto& leaf : leaves) {
    if (leaf.value > incumbent + tol || !seen.insert(leaf.sol.basis).second) continue;
    report.optimizers.push_back(leaf.sol.as_candidate(tol));
  }
  std::sort(report.optimizers.begin(), report.optimizers.end(),
            [](const CandidateFit& l, const CandidateFit& r) { return l.active < r.active; });
  return report;
}

std::vector<ProfilePoint> lms_profile(const Dataset& data, std::optional<std::size_t> k) {
  if (data.p() != 1) throw Error(ErrorCode::domain, "objective profile needs p = 1");
  const std::size_t drop = k ? *k : data.lms_drop_count();
  if (drop > data.max_drop_count()) throw Error(ErrorCode::domain, "drop count k out of range");

  // Kinks of |y_i - x_i t| and crossings of any two residual branches.
  std::vector<double> breaks;
  const std::size_t n = data.n();
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = data.row(i)(0), yi = data.response(i);
    if (xi != 0.0) breaks.push_back(yi / xi);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double xj = data.row(j)(0), yj = data.response(j);
      if (xi != xj) breaks.push_back((yi - yj) / (xi - xj));
      if (xi != -xj) breaks.push_back((yi + yj) / (xi + xj));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) {
                             return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
                           }),
               breaks.end());
  const double span = breaks.empty() ? 1.0 : std::max(1.0, breaks.back() - breaks.front());
  const double lo = breaks.empty() ? -1.0 : breaks.front();
  const double hi = breaks.empty() ? 1.0 : breaks.back();
  breaks.insert(breaks.begin(), lo - 0.1 * span);
  breaks.push_back(hi + 0.1 * span);

  std::vector<ProfilePoint> out;
  out.reserve(breaks.size());
  Vector theta(1);
  for (double t : breaks) {
    theta(0) = t;
    out.push_back({t, objective_fk(data, theta, drop)});
  }
  return out;
}

std::vector<double> profile_local_minimizers(const std::vector<ProfilePoint>& profile,
                                             double tolerance) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    if (profile[i].value < profile[i - 1].value - tolerance &&
        profile[i].value < profile[i + 1].value - tolerance) {
      out.push_back(profile[i].theta);
    }
  }
  return out;
}

}  // namespace lms

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lms/core.hpp"

namespace lms {

/// Seeded generator with distributions defined here rather than by the
/// standard library, so sequences are identical on every platform.
/// Engine: std::mt19937_64, whose output sequence the standard fixes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed for an independent stream, derived by SplitMix64 from (seed, a, b).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal by the Box-Muller transform.
  double normal();
  /// `count` distinct values from `pool`, in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample(std::vector<std::size_t> pool, std::size_t count);

 private:
  std::mt19937_64 engine_;
};

/// Parameters of a synthetic contaminated regression instance.
struct GeneratorConfig {
  std::size_t n = 10;
  std::size_t p = 2;
  double outlier_fraction = 0.0;
  double noise = 1.0;
  bool intercept = true;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Dataset data;
  Vector coefficients;
  std::vector<std::size_t> outliers;  // zero-based rows
};

/// Regressors: constant first column when `intercept`, other entries
/// U(-10, 10). Coefficients beta_j = j. Responses x_i^T beta + N(0, noise^2);
/// floor(fraction * n) rows chosen uniformly get an extra U(25, 50) shift.
/// Requires n/2 >= p and 0 <= fraction < 0.5.
GeneratedInstance generate_instance(const GeneratorConfig& config);

/// Random general-position candidate for enumeration experiments: all
/// entries of X and y uniform on (-1, 1), or the intercept-only design when
/// `intercept_only` (p must then be 1). Needs only n >= p+1.
Dataset random_dataset(std::size_t n, std::size_t p, Rng& rng, bool intercept_only = false);

}  // namespace lms

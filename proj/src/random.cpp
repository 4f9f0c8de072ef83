#include "lms/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lms {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = seed;
  std::uint64_t out = splitmix64(state);
  state ^= a * 0xd1342543de82ef95ULL;
  out ^= splitmix64(state);
  state ^= b * 0x2545f4914f6cdd1dULL;
  return out ^ splitmix64(state);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::domain, "empty integer range");
  // Largest multiple of bound representable, to reject the biased tail.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = next();
    if (v < limit) return v % bound;
  }
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> Rng::sample(std::vector<std::size_t> pool, std::size_t count) {
  if (count > pool.size()) throw Error(ErrorCode::domain, "sample larger than pool");
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

GeneratedInstance generate_instance(const GeneratorConfig& config) {
  if (config.p < 1 || config.n < 2 * config.p) {
    throw Error(ErrorCode::invalid_dataset, "generator needs p >= 1 and n/2 >= p");
  }
  if (!(config.outlier_fraction >= 0.0 && config.outlier_fraction < 0.5)) {
    throw Error(ErrorCode::domain, "outlier fraction must lie in [0, 0.5)");
  }
  if (!(config.noise >= 0.0)) throw Error(ErrorCode::domain, "noise must be nonnegative");

  Rng rng(config.seed);
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto p = static_cast<Eigen::Index>(config.p);
  Matrix x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = (config.intercept && j == 0) ? 1.0 : rng.uniform(-10.0, 10.0);
    }
  }
  Vector beta(p);
  for (Eigen::Index j = 0; j < p; ++j) beta(j) = static_cast<double>(j + 1);
  Vector y = x * beta;
  for (Eigen::Index i = 0; i < n; ++i) y(i) += config.noise * rng.normal();

  std::vector<std::size_t> rows(config.n);
  for (std::size_t i = 0; i < config.n; ++i) rows[i] = i;
  const auto contaminated = static_cast<std::size_t>(
      std::floor(config.outlier_fraction * static_cast<double>(config.n)));
  auto outliers = rng.sample(rows, contaminated);
  std::sort(outliers.begin(), outliers.end());
  for (auto i : outliers) y(static_cast<Eigen::Index>(i)) += rng.uniform(25.0, 50.0);

  return {Dataset(std::move(x), std::move(y)), std::move(beta), std::move(outliers)};
}

Dataset random_dataset(std::size_t n, std::size_t p, Rng& rng, bool intercept_only) {
  if (intercept_only && p != 1) throw Error(ErrorCode::domain, "intercept-only design has p = 1");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(p);
  Matrix x(rows, cols);
  Vector y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = intercept_only ? 1.0 : rng.uniform(-1.0, 1.0);
    y(i) = rng.uniform(-1.0, 1.0);
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace lms

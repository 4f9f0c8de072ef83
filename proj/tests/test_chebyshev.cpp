#include <doctest.h>

#include <cmath>

#include "lms/chebyshev.hpp"
#include "lms/random.hpp"
#include "lms/search.hpp"
#include "support.hpp"

using namespace lms;
using lms::test::five_points;
using lms::test::vec;

namespace {

// Independent evaluation of the stationarity conditions straight from the data.
double stationarity_defect(const Dataset& data, const CandidateFit& fit) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(data.p()));
  double lambda_sum = 0.0, level = 0.0;
  for (std::size_t j = 0; j < fit.active.size(); ++j) {
    const auto i = fit.active[j];
    sum += fit.lambda[j] * fit.eps[j] * data.x().row(static_cast<Eigen::Index>(i)).transpose();
    lambda_sum += fit.lambda[j];
    const double r = data.y()(static_cast<Eigen::Index>(i)) -
                     data.x().row(static_cast<Eigen::Index>(i)).dot(fit.theta);
    level = std::max(level, std::abs(fit.eps[j] * r - fit.rho));
  }
  return std::max({sum.cwiseAbs().maxCoeff(), std::abs(lambda_sum - 1.0), level});
}

double max_residual(const Dataset& data, const IndexSet& subset, const Vector& theta) {
  double m = 0.0;
  for (auto i : subset) {
    m = std::max(m, std::abs(data.y()(static_cast<Eigen::Index>(i)) -
                             data.x().row(static_cast<Eigen::Index>(i)).dot(theta)));
  }
  return m;
}

}  // namespace

TEST_CASE("solve_minimax on the intercept model is the midrange") {
  const auto data = five_points();
  const auto pair = solve_minimax(data, IndexSet{0, 4});
  CHECK(pair.theta(0) == doctest::Approx(4.5));
  CHECK(pair.rho == doctest::Approx(4.5));

  const auto full = solve_minimax(data, IndexSet::all(5));
  CHECK(full.theta(0) == doctest::Approx(4.5));
  CHECK(full.rho == doctest::Approx(4.5));
  CHECK(full.active.contains(0));
  CHECK(full.active.contains(4));
  CHECK(full.basis == IndexSet{0, 4});
}

TEST_CASE("solve_minimax line fit matches the LP reference") {
  // Reference from an independent LP solve (scipy linprog, HiGHS) of the
  // same problem: theta = (-3.6, 1.2), rho = 2.4, tight at t = 1, 5, 6.
  std::vector<std::vector<double>> rows;
  for (int t = 1; t <= 6; ++t) rows.push_back({1.0, static_cast<double>(t)});
  const auto data = test::make_data(rows, {0, 0, 0, 0, 0, 6});
  const auto sol = solve_minimax(data, IndexSet::all(6));
  CHECK(sol.theta(0) == doctest::Approx(-3.6).epsilon(1e-12));
  CHECK(sol.theta(1) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(sol.rho == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(sol.active.one_based() == std::vector<std::size_t>{1, 5, 6});
  CHECK(check_optimality(data, sol.as_candidate(), Strictness::strict));
}

TEST_CASE("solve_minimax errors") {
  const auto data = five_points();
  try {
    solve_minimax(data, IndexSet{2});
    FAIL("expected underdetermined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::underdetermined);
  }
  const auto flat = test::make_data({{1, 0}, {1, 0}, {1, 0}, {1, 1}}, {0, 1, 2, 3});
  try {
    solve_minimax(flat, IndexSet{0, 1, 2});
    FAIL("expected degenerate subset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_subset);
  }
}

TEST_CASE("solve_minimax is deterministic") {
  Rng rng(3);
  const auto data = random_dataset(12, 3, rng);
  const auto a = solve_minimax(data, IndexSet::all(12));
  const auto b = solve_minimax(data, IndexSet::all(12));
  CHECK(a.theta == b.theta);
  CHECK(a.rho == b.rho);
  CHECK(a.basis == b.basis);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("equioscillation_point on the intercept model") {
  const auto data = five_points();
  const auto fit = equioscillation_point(data, IndexSet{0, 2});
  CHECK(fit.theta(0) == doctest::Approx(2));
  CHECK(fit.rho == doctest::Approx(2));
  CHECK(fit.eps == std::vector<int>{-1, 1});
  CHECK(fit.lambda[0] == doctest::Approx(0.5));
  CHECK(fit.lambda[1] == doctest::Approx(0.5));
  CHECK_FALSE(fit.degenerate);

  const auto upper = equioscillation_point(data, IndexSet{2, 4});
  CHECK(upper.theta(0) == doctest::Approx(6.5));
  CHECK(upper.rho == doctest::Approx(2.5));
}

TEST_CASE("equioscillation points satisfy stationarity") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t p = 1 + rng.below(3);
    const auto data = random_dataset(p + 3, p, rng);
    for (const auto& s : all_subsets(data.n(), p + 1)) {
      const auto fit = equioscillation_point(data, s);
      CHECK(stationarity_defect(data, fit) < 1e-9);
      CHECK(check_optimality(data, fit));
      CHECK(fit.rho >= 0.0);
      for (auto i : s) {
        const double r = std::abs(data.response(i) - data.row(i).dot(fit.theta));
        CHECK(r == doctest::Approx(fit.rho).epsilon(1e-9));
      }
      if (!fit.degenerate) CHECK(check_optimality(data, fit, Strictness::strict));
    }
  }
}

TEST_CASE("equioscillation_point degenerate cases") {
  // x3 is needed for rank 2, so its coefficient in the kernel vanishes.
  const auto data = test::make_data({{1, 0}, {2, 0}, {0, 1}, {1, 1}}, {0, 1, 2, 3});
  const auto fit = equioscillation_point(data, IndexSet{0, 1, 2});
  CHECK(fit.degenerate);
  CHECK(check_optimality(data, fit));
  CHECK_FALSE(check_optimality(data, fit, Strictness::strict));

  const auto collinear = test::make_data({{1, 0}, {2, 0}, {3, 0}, {0, 1}}, {0, 1, 2, 3});
  try {
    equioscillation_point(collinear, IndexSet{0, 1, 2});
    FAIL("expected degenerate subset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_subset);
  }
  CHECK_THROWS_AS(equioscillation_point(data, IndexSet{0, 1}), Error);
}

TEST_CASE("check_optimality rejects perturbed and malformed fits") {
  const auto data = five_points();
  auto fit = equioscillation_point(data, IndexSet{0, 2});
  CHECK(check_optimality(data, fit, Strictness::strict));
  fit.theta(0) += 10 * kDefaultTolerance;
  CHECK_FALSE(check_optimality(data, fit));

  auto bad = equioscillation_point(data, IndexSet{0, 2});
  bad.lambda.pop_back();
  CHECK_FALSE(check_optimality(data, bad));
  bad = equioscillation_point(data, IndexSet{0, 2});
  bad.eps[0] = 0;
  CHECK_FALSE(check_optimality(data, bad));
  bad = equioscillation_point(data, IndexSet{0, 2});
  bad.active = IndexSet{0, 7};
  CHECK_FALSE(check_optimality(data, bad));
}

TEST_CASE("solve_minimax properties") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t p = 1 + rng.below(3);
    const std::size_t n = 2 * p + 2 + rng.below(5);
    const auto data = random_dataset(n, p, rng);
    const auto all = IndexSet::all(n);
    const auto sol = solve_minimax(data, all);

    // The LP solution recast as a candidate satisfies stationarity.
    const auto fit = sol.as_candidate();
    CHECK(check_optimality(data, fit, Strictness::strict));
    CHECK(sol.active.size() >= p + 1);
    CHECK(max_residual(data, all, sol.theta) == doctest::Approx(sol.rho).epsilon(1e-9));

    // Global minimality against random probes.
    for (int probe = 0; probe < 50; ++probe) {
      Vector theta = sol.theta;
      for (auto& t : theta) t += rng.uniform(-0.5, 0.5);
      CHECK(sol.rho <= max_residual(data, all, theta) + 1e-12);
    }

    // Monotone in the subset.
    const auto smaller = all.without(rng.below(n));
    CHECK(solve_minimax(data, smaller).rho <= sol.rho + 1e-12);

    // On a (p+1)-subset the LP and the equioscillation construction agree.
    for (const auto& s : all_subsets(n, p + 1)) {
      const auto eq = equioscillation_point(data, s);
      if (eq.degenerate) continue;
      const auto lp = solve_minimax(data, s);
      CHECK(lp.rho == doctest::Approx(eq.rho).epsilon(1e-9));
      CHECK((lp.theta - eq.theta).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

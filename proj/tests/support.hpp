#pragma once

#include <vector>

#include "lms/core.hpp"

namespace lms::test {

/// Intercept-only model x_i = [1].
inline Dataset intercept_data(const std::vector<double>& y) {
  Matrix x = Matrix::Ones(static_cast<Eigen::Index>(y.size()), 1);
  return Dataset(x, Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size())));
}

/// The five-point intercept instance used throughout the tests.
inline Dataset five_points() { return intercept_data({0, 1, 4, 5, 9}); }

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Dataset make_data(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return Dataset(x, Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size())));
}

}  // namespace lms::test

#include "lms/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lms {

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 1; i < indices_.size(); ++i) {
    if (indices_[i - 1] >= indices_[i]) {
      throw Error(ErrorCode::domain, "IndexSet must be strictly increasing");
    }
  }
}

bool IndexSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

IndexSet IndexSet::without(std::size_t index) const {
  std::vector<std::size_t> rest;
  rest.reserve(indices_.size());
  std::copy_if(indices_.begin(), indices_.end(), std::back_inserter(rest),
               [index](std::size_t i) { return i != index; });
  return IndexSet(std::move(rest));
}

std::vector<std::size_t> IndexSet::one_based() const {
  std::vector<std::size_t> out(indices_);
  for (auto& i : out) ++i;
  return out;
}

bool IndexSet::valid_for(std::size_t n) const noexcept {
  return indices_.empty() || indices_.back() < n;
}

IndexSet IndexSet::all(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return IndexSet(std::move(idx));
}

Dataset::Dataset(Matrix x, Vector y, double rank_tolerance)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.size()) {
    throw Error(ErrorCode::dimension_mismatch, "X and y have different row counts");
  }
  if (x_.cols() < 1) {
    throw Error(ErrorCode::invalid_dataset, "model dimension p must be at least 1");
  }
  if (n() < p() + 1) {
    throw Error(ErrorCode::invalid_dataset, "need at least p+1 observations");
  }
  if (!x_.allFinite() || !y_.allFinite()) {
    throw Error(ErrorCode::invalid_dataset, "non-finite value in data");
  }
  const auto deficient = dependent_columns(x_, rank_tolerance);
  if (!deficient.empty()) {
    std::ostringstream msg;
    msg << "design matrix is rank deficient; dependent columns:";
    for (auto c : deficient) msg << " x" << c + 1;
    throw Error(ErrorCode::invalid_dataset, msg.str());
  }
}

Matrix Dataset::rows(const IndexSet& rows) const {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x_.cols());
  Eigen::Index r = 0;
  for (auto i : rows) out.row(r++) = x_.row(static_cast<Eigen::Index>(i));
  return out;
}

void Dataset::require_lms_shape() const {
  if (n() < 2 * p()) {
    throw Error(ErrorCode::invalid_dataset,
                "LMS requires n/2 >= p (n=" + std::to_string(n()) +
                    ", p=" + std::to_string(p()) + ")");
  }
}

std::vector<std::size_t> Dataset::dependent_columns(const Matrix& x, double tolerance) {
  std::vector<std::size_t> out;
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::ColPivHouseholderQR<Matrix> qr(x.leftCols(c + 1));
    qr.setThreshold(tolerance);
    const auto r = qr.rank();
    if (r == rank) {
      out.push_back(static_cast<std::size_t>(c));
    } else {
      rank = r;
    }
  }
  return out;
}

double kth_smallest(std::span<const double> values, std::size_t k) {
  if (values.empty()) throw Error(ErrorCode::domain, "order statistic of empty list");
  if (k < 1 || k > values.size()) {
    throw Error(ErrorCode::domain, "order statistic rank k=" + std::to_string(k) +
                                       " outside [1, " + std::to_string(values.size()) + "]");
  }
  std::vector<double> work(values.begin(), values.end());
  auto nth = work.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(work.begin(), nth, work.end());
  return *nth;
}

double median_h(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::domain, "median of empty list");
  return kth_smallest(values, values.size() / 2 + 1);
}

std::vector<double> abs_residuals(const Dataset& data, const Vector& theta) {
  if (static_cast<std::size_t>(theta.size()) != data.p()) {
    throw Error(ErrorCode::dimension_mismatch, "theta length differs from p");
  }
  const Vector r = data.y() - data.x() * theta;
  std::vector<double> out(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) out[i] = std::abs(r(static_cast<Eigen::Index>(i)));
  return out;
}

double objective_fk(const Dataset& data, const Vector& theta, std::size_t k) {
  if (k > data.max_drop_count()) {
    throw Error(ErrorCode::domain, "drop count k=" + std::to_string(k) + " outside [0, " +
                                       std::to_string(data.max_drop_count()) + "]");
  }
  const auto r = abs_residuals(data, theta);
  return kth_smallest(r, data.n() - k);
}

double objective_lms(const Dataset& data, const Vector& theta) {
  const auto r = abs_residuals(data, theta);
  return kth_smallest(r, data.median_rank());
}

}  // namespace lms

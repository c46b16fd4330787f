#include "vrkit/dataset.hpp"

#include <stdexcept>
#include <string>

namespace vrkit {

std::string_view to_string(LabelMapping mapping) {
  switch (mapping) {
    case LabelMapping::none: return "none";
    case LabelMapping::plus_minus: return "plus_minus";
    case LabelMapping::zero_one: return "zero_one";
    case LabelMapping::one_two: return "one_two";
  }
  return "none";
}

void Dataset::append_row(std::span<const std::uint32_t> indices, std::span<const double> values,
                         double label, bool grow_dim) {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("Dataset: index/value length mismatch");
  }
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (j > 0 && indices[j] <= indices[j - 1]) {
      throw std::invalid_argument("Dataset: row indices must be strictly increasing");
    }
  }
  if (!indices.empty() && indices.back() >= dim_) {
    if (!grow_dim) {
      throw std::invalid_argument("Dataset: feature index " + std::to_string(indices.back()) +
                                  " out of range for dimension " + std::to_string(dim_));
    }
    dim_ = static_cast<std::size_t>(indices.back()) + 1;
  }
  indices_.insert(indices_.end(), indices.begin(), indices.end());
  values_.insert(values_.end(), values.begin(), values.end());
  row_offsets_.push_back(indices_.size());
  labels_.push_back(label);
}

void Dataset::set_dim(std::size_t dim) {
  for (std::uint32_t idx : indices_) {
    if (idx >= dim) throw std::invalid_argument("Dataset: dimension smaller than a feature index");
  }
  dim_ = dim;
}

void Dataset::set_labels(std::vector<double> labels, LabelMapping mapping) {
  if (labels.size() != labels_.size()) {
    throw std::invalid_argument("Dataset: label count does not match row count");
  }
  labels_ = std::move(labels);
  mapping_ = mapping;
}

SparseRowView Dataset::row(std::size_t i) const {
  const std::size_t begin = row_offsets_[i];
  const std::size_t count = row_offsets_[i + 1] - begin;
  return {std::span<const std::uint32_t>(indices_).subspan(begin, count),
          std::span<const double>(values_).subspan(begin, count)};
}

double Dataset::dot(std::size_t i, const Vector& w) const {
  double s = 0.0;
  for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
    s += values_[p] * w[indices_[p]];
  }
  return s;
}

void Dataset::add_scaled_row(std::size_t i, double alpha, Vector& out) const {
  for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
    out[indices_[p]] += alpha * values_[p];
  }
}

double Dataset::row_squared_norm(std::size_t i) const {
  double s = 0.0;
  for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += values_[p] * values_[p];
  return s;
}

Vector Dataset::dense_row(std::size_t i) const {
  Vector a = Vector::Zero(static_cast<Eigen::Index>(dim_));
  add_scaled_row(i, 1.0, a);
  return a;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.dim_ == b.dim_ && a.row_offsets_ == b.row_offsets_ && a.indices_ == b.indices_ &&
         a.values_ == b.values_ && a.labels_ == b.labels_;
}

void Dataset::validate() const {
  if (row_offsets_.size() != labels_.size() + 1) {
    throw std::invalid_argument("Dataset: label count does not match row count");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    const auto r = row(i);
    for (std::size_t j = 0; j < r.indices.size(); ++j) {
      if (r.indices[j] >= dim_) throw std::invalid_argument("Dataset: feature index out of range");
      if (j > 0 && r.indices[j] <= r.indices[j - 1]) {
        throw std::invalid_argument("Dataset: row indices must be strictly increasing");
      }
    }
  }
}

}  // namespace vrkit

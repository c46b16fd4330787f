#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace vrkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// How raw file labels were mapped onto the dataset's labels.
enum class LabelMapping {
  none,          // labels kept as read (regression targets)
  plus_minus,    // {-1, +1} kept
  zero_one,      // {0, 1} -> {-1, +1}
  one_two,       // {1, 2} -> {-1, +1}
};

std::string_view to_string(LabelMapping mapping);

struct SparseRowView {
  std::span<const std::uint32_t> indices;
  std::span<const double> values;
};

// Rows of sparse features in CSR layout plus one label per row. Immutable once
// built; share it through std::shared_ptr<const Dataset>.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dim) : dim_(dim) {}

  // Appends a row. Indices must be strictly increasing and < dim(); an index
  // >= dim() grows the dimension when grow_dim is set.
  void append_row(std::span<const std::uint32_t> indices, std::span<const double> values,
                  double label, bool grow_dim = false);

  void set_dim(std::size_t dim);
  void set_labels(std::vector<double> labels, LabelMapping mapping);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return labels_.empty(); }

  SparseRowView row(std::size_t i) const;
  double label(std::size_t i) const { return labels_[i]; }
  const std::vector<double>& labels() const { return labels_; }
  LabelMapping label_mapping() const { return mapping_; }
  std::size_t nonzeros() const { return values_.size(); }

  double dot(std::size_t i, const Vector& w) const;
  // out += alpha * a_i
  void add_scaled_row(std::size_t i, double alpha, Vector& out) const;
  double row_squared_norm(std::size_t i) const;

  Vector dense_row(std::size_t i) const;

  // Throws std::invalid_argument when any structural invariant fails.
  void validate() const;

  // Compares dimension, rows and labels; the label mapping is provenance and
  // does not take part.
  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
  std::vector<double> labels_;
  LabelMapping mapping_ = LabelMapping::none;
};

}  // namespace vrkit

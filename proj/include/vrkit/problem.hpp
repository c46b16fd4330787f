#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "vrkit/dataset.hpp"

namespace vrkit {

enum class LossKind { logistic, squared, huber, squared_hinge };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

// Per-example loss phi(z, y) of the margin z = <a, w>.
struct Loss {
  LossKind kind = LossKind::logistic;
  double huber_delta = 1.0;

  double value(double z, double y) const;
  // d phi / d z
  double derivative(double z, double y) const;
  // Upper bound on d^2 phi / d z^2.
  double curvature_bound() const;
  bool is_classification() const { return kind == LossKind::logistic || kind == LossKind::squared_hinge; }
};

// f(w) = (1/n) sum_i phi(<a_i, w>, y_i) + (lambda/2) ||w||^2.
//
// Gradient methods here are free of oracle accounting; algorithms go through
// GradientOracle, which charges every evaluation.
class Problem {
 public:
  Problem(std::shared_ptr<const Dataset> data, Loss loss, double l2_reg);

  const Dataset& data() const { return *data_; }
  std::shared_ptr<const Dataset> data_ptr() const { return data_; }
  const Loss& loss() const { return loss_; }
  double l2_reg() const { return l2_reg_; }
  std::size_t size() const { return data_->size(); }
  std::size_t dim() const { return data_->dim(); }

  double value(const Vector& w) const;
  double example_value(std::size_t i, const Vector& w) const;
  Vector gradient(const Vector& w) const;
  // (1/|B|) sum_{i in B} grad f_i(w) + lambda w
  Vector batch_gradient(const Vector& w, std::span<const std::size_t> batch) const;
  // grad_B(x) - grad_B(anchor) + anchor_grad, evaluated in a single pass so
  // that x == anchor returns anchor_grad bit-for-bit.
  Vector variance_reduced_gradient(const Vector& x, const Vector& anchor, const Vector& anchor_grad,
                                   std::span<const std::size_t> batch) const;

  // Analytic upper bound on max_i L_i.
  double smoothness_bound() const;

 private:
  void check_dim(const Vector& w) const;
  void check_batch(std::span<const std::size_t> batch) const;

  std::shared_ptr<const Dataset> data_;
  Loss loss_;
  double l2_reg_;
};

struct GradOracleCounters {
  std::uint64_t per_example_grad_evals = 0;
  std::uint64_t full_grad_evals = 0;

  // Per-example evaluations with each full gradient counted as n.
  std::uint64_t effective_evals(std::size_t n) const {
    return per_example_grad_evals + full_grad_evals * n;
  }
  double passes(std::size_t n) const {
    return static_cast<double>(effective_evals(n)) / static_cast<double>(n);
  }
  friend bool operator==(const GradOracleCounters&, const GradOracleCounters&) = default;
};

// Problem gradients with evaluation accounting; one per run.
class GradientOracle {
 public:
  explicit GradientOracle(const Problem& problem) : problem_(&problem) {}

  const Problem& problem() const { return *problem_; }

  Vector full(const Vector& w);
  Vector batch(const Vector& w, std::span<const std::size_t> batch);
  // Charges two per-example gradients per batch element.
  Vector variance_reduced(const Vector& x, const Vector& anchor, const Vector& anchor_grad,
                          std::span<const std::size_t> batch);

  const GradOracleCounters& counters() const { return counters_; }
  double passes() const { return counters_.passes(problem_->size()); }

 private:
  const Problem* problem_;
  GradOracleCounters counters_;
};

}  // namespace vrkit

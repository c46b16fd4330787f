#include "vrkit/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vrkit {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::logistic: return "logistic";
    case LossKind::squared: return "squared";
    case LossKind::huber: return "huber";
    case LossKind::squared_hinge: return "squared-hinge";
  }
  return "logistic";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "logistic") return LossKind::logistic;
  if (name == "squared") return LossKind::squared;
  if (name == "huber") return LossKind::huber;
  if (name == "squared-hinge" || name == "squared_hinge") return LossKind::squared_hinge;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

namespace {

// log(1 + exp(-m))
double softplus_neg(double m) {
  return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// 1 / (1 + exp(m))
double sigmoid_neg(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

double Loss::value(double z, double y) const {
  switch (kind) {
    case LossKind::logistic:
      return softplus_neg(y * z);
    case LossKind::squared:
      return 0.5 * (z - y) * (z - y);
    case LossKind::huber: {
      const double r = std::abs(z - y);
      return r <= huber_delta ? 0.5 * r * r : huber_delta * (r - 0.5 * huber_delta);
    }
    case LossKind::squared_hinge: {
      const double h = std::max(0.0, 1.0 - y * z);
      return h * h;
    }
  }
  return 0.0;
}

double Loss::derivative(double z, double y) const {
  switch (kind) {
    case LossKind::logistic:
      return -y * sigmoid_neg(y * z);
    case LossKind::squared:
      return z - y;
    case LossKind::huber:
      return std::clamp(z - y, -huber_delta, huber_delta);
    case LossKind::squared_hinge:
      return -2.0 * y * std::max(0.0, 1.0 - y * z);
  }
  return 0.0;
}

double Loss::curvature_bound() const {
  switch (kind) {
    case LossKind::logistic: return 0.25;
    case LossKind::squared: return 1.0;
    case LossKind::huber: return 1.0;
    case LossKind::squared_hinge: return 2.0;
  }
  return 1.0;
}

Problem::Problem(std::shared_ptr<const Dataset> data, Loss loss, double l2_reg)
    : data_(std::move(data)), loss_(loss), l2_reg_(l2_reg) {
  if (!data_) throw std::invalid_argument("Problem: null dataset");
  data_->validate();
  if (!(l2_reg_ >= 0.0)) throw std::invalid_argument("Problem: l2 regularization must be >= 0");
  if (loss_.kind == LossKind::huber && !(loss_.huber_delta > 0.0)) {
    throw std::invalid_argument("Problem: huber delta must be > 0");
  }
  if (loss_.is_classification()) {
    for (double y : data_->labels()) {
      if (y != 1.0 && y != -1.0) {
        throw std::invalid_argument("Problem: classification labels must be -1 or +1, got " +
                                    std::to_string(y));
      }
    }
  }
}

void Problem::check_dim(const Vector& w) const {
  if (static_cast<std::size_t>(w.size()) != dim()) {
    throw std::invalid_argument("Problem: iterate has dimension " + std::to_string(w.size()) +
                                ", expected " + std::to_string(dim()));
  }
}

void Problem::check_batch(std::span<const std::size_t> batch) const {
  if (batch.empty()) throw std::invalid_argument("Problem: empty batch");
  for (std::size_t i : batch) {
    if (i >= size()) throw std::invalid_argument("Problem: batch index out of range");
  }
}

double Problem::value(const Vector& w) const {
  check_dim(w);
  const Dataset& d = *data_;
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += loss_.value(d.dot(i, w), d.label(i));
  return s / static_cast<double>(d.size()) + 0.5 * l2_reg_ * w.squaredNorm();
}

double Problem::example_value(std::size_t i, const Vector& w) const {
  check_dim(w);
  return loss_.value(data_->dot(i, w), data_->label(i)) + 0.5 * l2_reg_ * w.squaredNorm();
}

Vector Problem::gradient(const Vector& w) const {
  check_dim(w);
  const Dataset& d = *data_;
  Vector g = Vector::Zero(w.size());
  const double inv_n = 1.0 / static_cast<double>(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.add_scaled_row(i, inv_n * loss_.derivative(d.dot(i, w), d.label(i)), g);
  }
  g += l2_reg_ * w;
  return g;
}

Vector Problem::batch_gradient(const Vector& w, std::span<const std::size_t> batch) const {
  check_dim(w);
  check_batch(batch);
  const Dataset& d = *data_;
  Vector g = Vector::Zero(w.size());
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i : batch) {
    d.add_scaled_row(i, inv_b * loss_.derivative(d.dot(i, w), d.label(i)), g);
  }
  g += l2_reg_ * w;
  return g;
}

Vector Problem::variance_reduced_gradient(const Vector& x, const Vector& anchor,
                                          const Vector& anchor_grad,
                                          std::span<const std::size_t> batch) const {
  check_dim(x);
  check_dim(anchor);
  check_dim(anchor_grad);
  check_batch(batch);
  const Dataset& d = *data_;
  Vector g = anchor_grad;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i : batch) {
    const double y = d.label(i);
    const double diff = loss_.derivative(d.dot(i, x), y) - loss_.derivative(d.dot(i, anchor), y);
    if (diff != 0.0) d.add_scaled_row(i, inv_b * diff, g);
  }
  if (l2_reg_ != 0.0) g += l2_reg_ * (x - anchor);
  return g;
}

double Problem::smoothness_bound() const {
  if (data_->empty()) throw std::invalid_argument("Problem: empty dataset");
  double max_sq = 0.0;
  for (std::size_t i = 0; i < data_->size(); ++i) max_sq = std::max(max_sq, data_->row_squared_norm(i));
  return loss_.curvature_bound() * max_sq + l2_reg_;
}

Vector GradientOracle::full(const Vector& w) {
  Vector g = problem_->gradient(w);
  ++counters_.full_grad_evals;
  return g;
}

Vector GradientOracle::batch(const Vector& w, std::span<const std::size_t> batch) {
  Vector g = problem_->batch_gradient(w, batch);
  counters_.per_example_grad_evals += batch.size();
  return g;
}

Vector GradientOracle::variance_reduced(const Vector& x, const Vector& anchor,
                                        const Vector& anchor_grad,
                                        std::span<const std::size_t> batch) {
  Vector g = problem_->variance_reduced_gradient(x, anchor, anchor_grad, batch);
  counters_.per_example_grad_evals += 2 * batch.size();
  return g;
}

}  // namespace vrkit

#pragma once

#include <optional>

#include "vrkit/problem.hpp"
#include "vrkit/rng.hpp"

namespace vrkit {

enum class StepSizeKind { constant, heuristic };

struct StepSizeRule {
  StepSizeKind kind = StepSizeKind::heuristic;
  double eta = 1.0;  // used when kind == constant

  static StepSizeRule constant(double eta) { return {StepSizeKind::constant, eta}; }
  static StepSizeRule heuristic() { return {StepSizeKind::heuristic, 1.0}; }
};

// Tuning-free outer-loop step size eta_k = ||grad f(w_k)|| / (sqrt(2) max_i L_i)
// with L_i = ||grad f(w_i) - grad f(w_{i-1})|| / ||w_i - w_{i-1}||, a lower
// estimate of L_max from co-coercivity. The first call probes a random point
// w_{-1} = w_0 + u (1e-3 (1 + ||w_0||)), u uniform on the unit sphere, and
// charges that full gradient to the oracle.
class SmoothnessStepHeuristic {
 public:
  double next(GradientOracle& oracle, const Vector& w, const Vector& grad, Rng& rng);

  double max_smoothness() const { return max_smoothness_; }
  std::optional<double> last_step() const { return last_step_; }

 private:
  std::optional<Vector> prev_w_;
  std::optional<Vector> prev_grad_;
  double max_smoothness_ = 0.0;
  std::optional<double> last_step_;
};

// Dispatches a StepSizeRule for outer-loop methods.
class OuterStepSize {
 public:
  explicit OuterStepSize(StepSizeRule rule) : rule_(rule) {}

  double next(GradientOracle& oracle, const Vector& w, const Vector& grad, Rng& rng) {
    if (rule_.kind == StepSizeKind::constant) return rule_.eta;
    return heuristic_.next(oracle, w, grad, rng);
  }
  const StepSizeRule& rule() const { return rule_; }

 private:
  StepSizeRule rule_;
  SmoothnessStepHeuristic heuristic_;
};

}  // namespace vrkit

#include "vrkit/step_size.hpp"

#include <cmath>

namespace vrkit {

double SmoothnessStepHeuristic::next(GradientOracle& oracle, const Vector& w, const Vector& grad,
                                     Rng& rng) {
  if (!prev_w_) {
    Vector u(w.size());
    do {
      for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = rng.normal();
    } while (u.norm() == 0.0);
    u.normalize();
    Vector probe = w + (1e-3 * (1.0 + w.norm())) * u;
    prev_grad_ = oracle.full(probe);
    prev_w_ = std::move(probe);
  }

  const double dw = (w - *prev_w_).norm();
  const double gnorm = grad.norm();
  double eta;
  if (dw == 0.0 || gnorm == 0.0) {
    eta = last_step_.value_or(1.0);
  } else {
    max_smoothness_ = std::max(max_smoothness_, (grad - *prev_grad_).norm() / dw);
    eta = max_smoothness_ > 0.0 ? gnorm / (std::sqrt(2.0) * max_smoothness_) : last_step_.value_or(1.0);
  }
  if (!std::isfinite(eta) || !(eta > 0.0)) eta = last_step_.value_or(1.0);

  prev_w_ = w;
  prev_grad_ = grad;
  last_step_ = eta;
  return eta;
}

}  // namespace vrkit

#include "vrkit/armijo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vrkit/rng.hpp"

namespace vrkit {

double armijo_max_step(double a, double c, double eta_max, double x, int component) {
  if (component != 1 && component != 2) throw std::invalid_argument("armijo_max_step: component must be 1 or 2");
  if (x == 0.0) return 0.0;
  const double shift = component == 1 ? 1.0 : -1.0;
  const double bound = (1.0 - shift / x - c) / a;
  return std::clamp(bound, 0.0, eta_max);
}

ArmijoCounterexampleResult svrg_inner_armijo_1d(double a, double c, double eta_max, double x0,
                                                std::size_t steps, std::uint64_t seed) {
  if (!(a > 0.0) || !(c > 0.0) || !(eta_max > 0.0)) {
    throw std::invalid_argument("svrg_inner_armijo_1d: a, c and eta_max must be > 0");
  }
  if (a * eta_max < 1.0) throw std::invalid_argument("svrg_inner_armijo_1d: requires a >= 1 / eta_max");

  ArmijoCounterexampleResult out;
  out.abs_iterates.reserve(steps + 1);
  out.abs_iterates.push_back(std::abs(x0));
  const double zone = std::min(1.0 / c, 1.0);
  Rng rng(seed);
  double x = x0;
  for (std::size_t t = 0; t < steps; ++t) {
    const int i = rng.index(2) == 0 ? 1 : 2;
    const double g = 2.0 * a * x;
    const double eta = armijo_max_step(a, c, eta_max, x, i);
    const double next = x - eta * g;
    const double ax = std::abs(x);
    if (ax > 0.0 && ax < zone && std::abs(next) < ax) ++out.contractions;
    x = next;
    out.components.push_back(i);
    out.step_sizes.push_back(eta);
    out.abs_iterates.push_back(std::abs(x));
  }
  return out;
}

}  // namespace vrkit

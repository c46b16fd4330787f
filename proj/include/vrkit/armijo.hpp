#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vrkit {

struct ArmijoCounterexampleResult {
  std::vector<double> abs_iterates;   // |x_t| for t = 0..steps
  std::vector<double> step_sizes;     // eta_t chosen by the line search
  std::vector<int> components;        // sampled i_t in {1, 2}
  // Steps with |x_t| in (0, min(1/c, 1)) where |x_{t+1}| < |x_t|.
  std::size_t contractions = 0;
};

// Largest eta in [0, eta_max] with
//   f_i(x - eta g) <= f_i(x) - c eta g^2,  f_i(x) = a (x - s_i)^2,
// s_1 = +1, s_2 = -1, for the variance-reduced direction g = 2 a x.
// Closed form: clamp((1 - s_i / x - c) / a, 0, eta_max); x = 0 gives 0.
double armijo_max_step(double a, double c, double eta_max, double x, int component);

// SVRG with an Armijo line search on each sampled component, run on
// f(x) = (a (x - 1)^2 + a (x + 1)^2) / 2. The variance-reduced direction is
// 2 a x regardless of the snapshot, so the run is a single chain of steps.
// Requires a >= 1 / eta_max.
ArmijoCounterexampleResult svrg_inner_armijo_1d(double a, double c, double eta_max, double x0,
                                                std::size_t steps, std::uint64_t seed);

}  // namespace vrkit

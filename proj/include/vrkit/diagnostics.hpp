#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "vrkit/problem.hpp"

namespace vrkit {

struct Sigma2Estimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for exhaustive estimates
  bool exhaustive = true;
};

inline constexpr std::size_t kMaxExhaustiveSigma2 = 10000;

// E_i ||grad f_i(w) - grad f(w)||^2 at a single point w, either by enumerating
// all n examples or from `samples` uniform draws with replacement.
Sigma2Estimate estimate_sigma2(const Problem& problem, const Vector& w, bool exhaustive,
                               std::size_t samples = 1000, std::uint64_t seed = 0);

struct PhaseFit {
  bool triggered = false;        // R >= theta fired somewhere in the series
  std::size_t knee = 0;          // last iteration of phase 1 (1-based)
  double phase1_growth = 0.0;    // max_{t <= knee} s_t / s_first - 1
  double phase2_exponent = 0.0;  // p in ||G_t||^2_* - ||G_knee||^2_* ~ (t - knee)^{2p}
};

inline constexpr std::size_t kMinPhaseSeries = 64;

// Splits a series s_t = ||G_t||_* (t = 1..T, element t-1) at the first even
// t >= burn_in with R >= theta. Without a trigger the knee is the split of the
// best two-piece fit in log-log space (constant, then linear) over a log grid.
// The phase-2 exponent is half the least-squares slope of
// log(s_t^2 - s_knee^2) against log(t - knee), so sqrt(t - T0) growth gives
// 0.5 and a flat series gives 0.
PhaseFit fit_phase_transition(std::span<const double> g_norm_star, double theta = 0.5,
                              std::size_t burn_in = 2);

}  // namespace vrkit

#include "vrkit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vrkit/phase.hpp"
#include "vrkit/rng.hpp"

namespace vrkit {

Sigma2Estimate estimate_sigma2(const Problem& problem, const Vector& w, bool exhaustive,
                               std::size_t samples, std::uint64_t seed) {
  const std::size_t n = problem.size();
  const Vector mean = problem.gradient(w);
  std::size_t one[1];
  auto deviation = [&](std::size_t i) {
    one[0] = i;
    return (problem.batch_gradient(w, one) - mean).squaredNorm();
  };

  if (exhaustive) {
    if (n > kMaxExhaustiveSigma2) throw std::invalid_argument("estimate_sigma2: n too large to enumerate");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += deviation(i);
    return {sum / static_cast<double>(n), 0.0, true};
  }

  if (samples < 2) throw std::invalid_argument("estimate_sigma2: need at least two samples");
  Rng rng(seed);
  double mean_dev = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = deviation(rng.index(n));
    const double delta = x - mean_dev;
    mean_dev += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean_dev);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean_dev, std::sqrt(var / static_cast<double>(samples)), false};
}

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Total squared residual of: constant log s on [1, k], least-squares line in
// (log t, log s) on (k, T].
double two_piece_residual(const std::vector<double>& log_t, const std::vector<double>& log_s,
                          std::size_t k) {
  double sse = 0.0;
  const double c = std::accumulate(log_s.begin(), log_s.begin() + static_cast<long>(k), 0.0) /
                   static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) sse += (log_s[i] - c) * (log_s[i] - c);

  const std::vector<double> x(log_t.begin() + static_cast<long>(k), log_t.end());
  const std::vector<double> y(log_s.begin() + static_cast<long>(k), log_s.end());
  if (x.size() < 2) return sse;
  const double b = slope(x, y);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + b * (x[i] - mx));
    sse += r * r;
  }
  return sse;
}

}  // namespace

PhaseFit fit_phase_transition(std::span<const double> s, double theta, std::size_t burn_in) {
  const std::size_t T = s.size();
  if (T < kMinPhaseSeries) throw std::invalid_argument("fit_phase_transition: series too short");

  PhaseFit fit;
  PhaseTest test(theta, std::max<std::size_t>(burn_in, 2));
  for (std::size_t t = 1; t <= T; ++t) {
    if (test.push(s[t - 1] * s[t - 1])) {
      fit.triggered = true;
      fit.knee = t;
      break;
    }
  }

  if (!fit.triggered) {
    std::vector<double> log_t(T), log_s(T);
    const double floor = std::numeric_limits<double>::min();
    for (std::size_t t = 1; t <= T; ++t) {
      log_t[t - 1] = std::log(static_cast<double>(t));
      log_s[t - 1] = std::log(std::max(s[t - 1], floor));
    }
    double best = std::numeric_limits<double>::infinity();
    fit.knee = T;
    for (double k = 2.0; k < static_cast<double>(T - 1); k *= 1.25) {
      const auto split = static_cast<std::size_t>(k);
      const double r = two_piece_residual(log_t, log_s, split);
      if (r < best) {
        best = r;
        fit.knee = split;
      }
    }
  }

  std::size_t first = 0;
  while (first < fit.knee && !(s[first] > 0.0)) ++first;
  if (first < fit.knee) {
    const double base = s[first];
    for (std::size_t i = first; i < fit.knee; ++i) {
      fit.phase1_growth = std::max(fit.phase1_growth, s[i] / base - 1.0);
    }
  }

  const double knee_sq = s[fit.knee - 1] * s[fit.knee - 1];
  std::vector<double> x, y;
  for (std::size_t t = fit.knee + 1; t <= T; ++t) {
    const double excess = s[t - 1] * s[t - 1] - knee_sq;
    if (excess > 0.0) {
      x.push_back(std::log(static_cast<double>(t - fit.knee)));
      y.push_back(std::log(excess));
    }
  }
  fit.phase2_exponent = x.size() >= 2 ? 0.5 * slope(x, y) : 0.0;
  return fit;
}

}  // namespace vrkit

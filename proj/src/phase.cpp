#include "vrkit/phase.hpp"

#include <stdexcept>

namespace vrkit {

std::optional<double> phase_ratio(std::span<const double> history, std::size_t t) {
  if (t == 0 || t % 2 != 0) throw std::invalid_argument("phase_ratio: t must be even and positive");
  if (t >= history.size()) throw std::invalid_argument("phase_ratio: history does not reach t");
  const double half = history[t / 2];
  if (!(half > 0.0)) return std::nullopt;
  return (history[t] - half) / half;
}

PhaseTest::PhaseTest(double theta, std::size_t burn_in_threshold)
    : theta_(theta), burn_in_threshold_(burn_in_threshold) {
  if (!(theta_ > 0.0)) throw std::invalid_argument("PhaseTest: theta must be > 0");
  reset();
}

void PhaseTest::reset(double initial) {
  history_.assign(1, initial);
  last_ratio_.reset();
  checks_ = 0;
}

bool PhaseTest::push(double g_norm_star_sq) {
  history_.push_back(g_norm_star_sq);
  const std::size_t now = t();
  if (now % 2 != 0 || now < burn_in_threshold_) return false;
  ++checks_;
  last_ratio_ = phase_ratio(history_, now);
  return last_ratio_ && *last_ratio_ >= theta_;
}

}  // namespace vrkit

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vrkit {

// R = (h[t] - h[t/2]) / h[t/2] for a history h[s] = ||G_s||_*^2 indexed from
// s = 0. Returns nullopt when h[t/2] == 0 (no decision). Throws
// std::invalid_argument for odd t or t outside the history.
std::optional<double> phase_ratio(std::span<const double> history, std::size_t t);

// Online form of the R >= theta stalling test. Holds every ||G_s||_*^2 since
// the last reset; checks run at even t >= burn_in_threshold.
class PhaseTest {
 public:
  PhaseTest(double theta, std::size_t burn_in_threshold);

  // Starts a new inner loop with ||G_0||_*^2 = initial.
  void reset(double initial = 0.0);
  // Records ||G_t||_*^2 for the next t and returns true when the test fires.
  bool push(double g_norm_star_sq);

  std::size_t t() const { return history_.size() - 1; }
  double theta() const { return theta_; }
  std::size_t burn_in_threshold() const { return burn_in_threshold_; }
  std::optional<double> last_ratio() const { return last_ratio_; }
  std::size_t checks() const { return checks_; }
  const std::vector<double>& history() const { return history_; }

 private:
  double theta_;
  std::size_t burn_in_threshold_;
  std::vector<double> history_;
  std::optional<double> last_ratio_;
  std::size_t checks_ = 0;
};

}  // namespace vrkit

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "vrkit/precond.hpp"
#include "vrkit/problem.hpp"
#include "vrkit/projection.hpp"
#include "vrkit/step_size.hpp"
#include "vrkit/trace.hpp"

namespace vrkit {

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

enum class SnapshotRule { last, average };
enum class TerminationReason { budget, target_reached, adaptive_stop, diverged };

std::string_view to_string(TerminationReason reason);

// Passed to RunOptions::observer once per inner step, after the
// preconditioner (if any) has absorbed the step's direction and before the
// iterate moves.
struct StepInfo {
  std::size_t outer = 0;  // outer loop k (0-based); epoch index for single-loop methods
  std::size_t t = 0;      // 1-based step within the loop
  const Vector& x;        // x_t
  const Vector& direction;            // g_t (or v_t for SARAH)
  const PrecondState* precond = nullptr;  // A_t; null for Euclidean methods
  const Vector* anchor = nullptr;         // snapshot w_k
  const Vector* anchor_grad = nullptr;    // grad f(w_k)
  std::span<const std::size_t> batch;
  double step_size = 0.0;
};

using StepObserver = std::function<void(const StepInfo&)>;

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t batch_size = 1;
  // Stop once the oracle has spent this many effective passes.
  double max_passes = std::numeric_limits<double>::infinity();
  // Stop at a trace row whose full-gradient norm is at or below this.
  std::optional<double> target_grad_norm;
  ProjectionSpec projection;
  StepObserver observer;
  // Abort when f exceeds divergence_factor * f(w_0) (only if f(w_0) > 0).
  double divergence_factor = 1e3;
};

struct RunResult {
  Vector final_iterate;
  // (1/K) sum_{k=1..K} w_k, filled when the snapshot rule is `average`.
  std::optional<Vector> averaged_iterate;
  Trace trace;
  GradOracleCounters counters;
  TerminationReason termination_reason = TerminationReason::budget;

  std::size_t outer_loops = 0;
  std::size_t inner_steps = 0;
  std::vector<std::size_t> inner_loop_lengths;
  std::size_t adaptive_stops = 0;
  std::vector<double> step_sizes;  // one per outer loop / step-size refresh

  std::vector<Vector> stage_iterates;         // multi-stage: output of each stage
  std::optional<std::size_t> switch_iteration;  // hybrid: AdaGrad step at which it switched
  std::size_t snapshot_refreshes = 0;         // loopless SVRG
  std::size_t step_fallbacks = 0;             // SVRG-BB
  std::vector<double> g_norm_star_history;    // AdaGrad phases: ||G_t||_* per step

  bool diverged() const { return termination_reason == TerminationReason::diverged; }
};

struct AdaSvrgConfig {
  std::size_t outer_loops = kUnbounded;  // K
  std::size_t inner_loops = 0;           // m; 0 selects n / b
  PrecondVariant variant = PrecondVariant::scalar();
  StepSizeRule step = StepSizeRule::heuristic();
  SnapshotRule snapshot = SnapshotRule::last;
};

struct AdaptiveTermination {
  double theta = 0.5;
  std::size_t max_inner = 0;  // M; 0 selects 10 n / b
  std::size_t burn_in = 0;    // first check at even t >= burn_in; 0 selects n / b
};

struct AdaSvrgAdaptiveConfig {
  std::size_t outer_loops = kUnbounded;
  AdaptiveTermination termination;
  PrecondVariant variant = PrecondVariant::scalar();
  StepSizeRule step = StepSizeRule::heuristic();
  SnapshotRule snapshot = SnapshotRule::last;
};

struct MultiStageConfig {
  std::size_t outer_loops_per_stage = 3;
  double epsilon = 0.125;
  PrecondVariant variant = PrecondVariant::scalar();
  StepSizeRule step = StepSizeRule::heuristic();
  SnapshotRule snapshot = SnapshotRule::average;
};

struct HybridConfig {
  std::size_t iterations = kUnbounded;  // T
  AdaptiveTermination termination;      // theta and M for both phases
  std::size_t switch_burn_in = 0;       // phase-1 checks at even t >= this; 0 selects 2 n / b
  PrecondVariant variant = PrecondVariant::scalar();
  // Phase 1 (AdaGrad) recomputes the heuristic every n / b steps.
  StepSizeRule step = StepSizeRule::heuristic();
  // Phase 2 (AdaSVRG); a heuristic here continues phase 1's estimate when
  // phase 1 is also heuristic.
  StepSizeRule adasvrg_step = StepSizeRule::heuristic();
  SnapshotRule snapshot = SnapshotRule::last;
};

struct SvrgConfig {
  std::size_t outer_loops = kUnbounded;
  std::size_t inner_loops = 0;
  double eta = 0.1;
  SnapshotRule snapshot = SnapshotRule::last;
};

struct LooplessSvrgConfig {
  std::size_t iterations = kUnbounded;
  double eta = 0.1;
  double refresh_probability = 0.0;  // 0 selects b / n
};

struct SarahConfig {
  std::size_t outer_loops = kUnbounded;
  std::size_t inner_loops = 0;
  double eta = 0.1;
};

struct SvrgBbConfig {
  std::size_t outer_loops = kUnbounded;
  std::size_t inner_loops = 0;
  double eta0 = 0.1;
};

struct AdagradConfig {
  std::size_t iterations = kUnbounded;
  PrecondVariant variant = PrecondVariant::scalar();
  StepSizeRule step = StepSizeRule::constant(1.0);
  // Heuristic refresh period in steps; 0 selects n / b.
  std::size_t step_refresh = 0;
};

struct SgdConfig {
  std::size_t iterations = kUnbounded;
  double eta = 0.1;
};

// AdaGrad inside the SVRG inner loop with m fixed per outer loop.
RunResult adasvrg_fixed(const Problem& problem, const Vector& w0, const AdaSvrgConfig& config,
                        const RunOptions& options = {});

// Stage i = 1..ceil(log2(1/epsilon)) runs K outer loops with m = 2^{i+1},
// starting from the previous stage's averaged iterate.
RunResult adasvrg_multistage(const Problem& problem, const Vector& w0, const MultiStageConfig& config,
                             const RunOptions& options = {});

// Inner loops end when R >= theta (or after M steps).
RunResult adasvrg_adaptive(const Problem& problem, const Vector& w0,
                           const AdaSvrgAdaptiveConfig& config, const RunOptions& options = {});

// AdaGrad until the R-test detects the stochastic phase, then adaptive AdaSVRG
// with floor((T - t) / (n / b)) outer loops.
RunResult hybrid_adagrad_adasvrg(const Problem& problem, const Vector& x1, const HybridConfig& config,
                                 const RunOptions& options = {});

RunResult svrg(const Problem& problem, const Vector& w0, const SvrgConfig& config,
               const RunOptions& options = {});
RunResult loopless_svrg(const Problem& problem, const Vector& w0, const LooplessSvrgConfig& config,
                        const RunOptions& options = {});
RunResult sarah(const Problem& problem, const Vector& w0, const SarahConfig& config,
                const RunOptions& options = {});
RunResult svrg_bb(const Problem& problem, const Vector& w0, const SvrgBbConfig& config,
                  const RunOptions& options = {});
RunResult adagrad(const Problem& problem, const Vector& x1, const AdagradConfig& config,
                  const RunOptions& options = {});
RunResult sgd(const Problem& problem, const Vector& x1, const SgdConfig& config,
              const RunOptions& options = {});

// Inner-loop lengths 2^{i+1} for i = 1..ceil(log2(1/epsilon)).
std::vector<std::size_t> multistage_schedule(double epsilon);

}  // namespace vrkit

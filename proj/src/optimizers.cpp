#include "vrkit/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vrkit/errors.hpp"
#include "vrkit/phase.hpp"
#include "vrkit/rng.hpp"

namespace vrkit {

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::budget: return "budget";
    case TerminationReason::target_reached: return "target_reached";
    case TerminationReason::adaptive_stop: return "adaptive_stop";
    case TerminationReason::diverged: return "diverged";
  }
  return "budget";
}

std::vector<std::size_t> multistage_schedule(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("multistage_schedule: epsilon must be in (0, 1)");
  }
  const auto stages = static_cast<std::size_t>(std::ceil(std::log2(1.0 / epsilon) - 1e-12));
  std::vector<std::size_t> schedule;
  for (std::size_t i = 1; i <= std::max<std::size_t>(stages, 1); ++i) {
    schedule.push_back(std::size_t{1} << (i + 1));
  }
  return schedule;
}

namespace {

std::size_t steps_per_epoch(const Problem& problem, std::size_t batch_size) {
  return std::max<std::size_t>(1, problem.size() / batch_size);
}

// Shared run state: oracle accounting, sampling, trace recording, divergence
// and budget checks.
class Run {
 public:
  Run(const Problem& problem, const Vector& w0, const RunOptions& options)
      : problem_(problem),
        options_(options),
        oracle_(problem),
        rng_(Rng::stream(options.seed, 0x5eed)),
        sampler_(problem.size()) {
    if (options_.batch_size == 0 || options_.batch_size > problem.size()) {
      throw std::invalid_argument("batch size must be in [1, n]");
    }
    if (static_cast<std::size_t>(w0.size()) != problem.dim()) {
      throw std::invalid_argument("initial point has dimension " + std::to_string(w0.size()) +
                                  ", expected " + std::to_string(problem.dim()));
    }
    f0_ = problem.value(w0);
    record(w0, 0.0, std::nullopt, 0, TraceEvent::none);
  }

  const Problem& problem() const { return problem_; }
  const RunOptions& options() const { return options_; }
  GradientOracle& oracle() { return oracle_; }
  Rng& rng() { return rng_; }
  std::size_t epoch_steps() const { return steps_per_epoch(problem_, options_.batch_size); }
  std::size_t dim() const { return problem_.dim(); }

  std::span<const std::size_t> draw_batch() {
    sampler_.sample(rng_, options_.batch_size, batch_);
    return batch_;
  }

  bool exhausted() const { return oracle_.passes() >= options_.max_passes; }
  bool halted() const { return halt_.has_value(); }
  void halt(TerminationReason reason) {
    if (!halt_) halt_ = reason;
  }
  std::optional<TerminationReason> halt_reason() const { return halt_; }

  void notify(const StepInfo& info) const {
    if (options_.observer) options_.observer(info);
  }

  // Appends a row when a full pass has elapsed since the last one, or always
  // for events. Returns false once the run must stop.
  bool observe(const Vector& x, double step, std::optional<double> gns, std::size_t outer,
               TraceEvent event = TraceEvent::none) {
    if (halt_ == TerminationReason::diverged) return false;
    if (event == TraceEvent::none && oracle_.passes() - last_recorded_ < 1.0) return true;
    return record(x, step, gns, outer, event);
  }

  // Per-step bookkeeping after the iterate moved.
  bool after_step(const Vector& x, double step, std::optional<double> gns, std::size_t outer) {
    if (!x.allFinite()) {
      mark_diverged(step, gns, outer);
      return false;
    }
    if (!observe(x, step, gns, outer)) return false;
    if (exhausted()) {
      halt(TerminationReason::budget);
      return false;
    }
    return true;
  }

  // Preconditioned move; a scalar accumulator still at zero leaves x in place.
  bool precond_move(const PrecondState& state, Vector& x, const Vector& g, double eta,
                    std::size_t outer) {
    if (!state.can_step()) return true;
    try {
      x = state.step(x, g, eta, options_.projection);
    } catch (const NumericalError&) {
      mark_diverged(eta, state.g_norm_star(), outer);
      return false;
    }
    return true;
  }

  void euclidean_move(Vector& x, const Vector& g, double eta) {
    x -= eta * g;
    if (options_.projection.active()) x = project_euclidean(options_.projection, x);
  }

  void mark_diverged(double step, std::optional<double> gns, std::size_t outer) {
    if (halt_ == TerminationReason::diverged) return;
    TraceRow row{oracle_.passes(), std::nan(""), std::nullopt, gns, step,
                 static_cast<std::int64_t>(outer), TraceEvent::diverged};
    trace_.append(row);
    halt_ = TerminationReason::diverged;
  }

  RunResult finish(RunResult result, Vector final_iterate, double step, std::optional<double> gns,
                   std::size_t outer) {
    if (halt_ != TerminationReason::diverged) record(final_iterate, step, gns, outer, TraceEvent::none);
    result.final_iterate = std::move(final_iterate);
    result.trace = std::move(trace_);
    result.counters = oracle_.counters();
    result.termination_reason = halt_.value_or(result.termination_reason);
    return result;
  }

 private:
  bool record(const Vector& x, double step, std::optional<double> gns, std::size_t outer,
              TraceEvent event) {
    TraceRow row;
    row.passes = oracle_.passes();
    row.step_size = step;
    row.g_norm_star = gns;
    row.outer = static_cast<std::int64_t>(outer);
    row.event = event;
    row.objective = problem_.value(x);
    const bool blown_up = !std::isfinite(row.objective) ||
                          (f0_ > 0.0 && row.objective > options_.divergence_factor * f0_);
    if (blown_up) {
      row.event = TraceEvent::diverged;
      trace_.append(row);
      halt_ = TerminationReason::diverged;
      return false;
    }
    row.grad_norm = problem_.gradient(x).norm();
    trace_.append(row);
    last_recorded_ = row.passes;
    if (options_.target_grad_norm && *row.grad_norm <= *options_.target_grad_norm) {
      halt(TerminationReason::target_reached);
      return false;
    }
    return true;
  }

  const Problem& problem_;
  RunOptions options_;
  GradientOracle oracle_;
  Rng rng_;
  BatchSampler sampler_;
  std::vector<std::size_t> batch_;
  Trace trace_;
  double f0_ = 0.0;
  double last_recorded_ = 0.0;
  std::optional<TerminationReason> halt_;
};

struct OuterLoopOutcome {
  Vector snapshot;
  std::size_t steps = 0;
  bool stopped_adaptively = false;
  bool ran = false;
  double eta = 0.0;
};

// One outer loop of AdaSVRG: full gradient at w, outer step size, fresh
// AdaGrad state, then up to `inner` variance-reduced preconditioned steps.
OuterLoopOutcome adasvrg_outer_loop(Run& run, const Vector& w, std::size_t k, std::size_t inner,
                                    PhaseTest* test, PrecondState& state, OuterStepSize& step_rule,
                                    SnapshotRule snapshot, RunResult& result) {
  OuterLoopOutcome out;
  out.snapshot = w;
  if (run.halted()) return out;
  if (run.exhausted()) {
    run.halt(TerminationReason::budget);
    return out;
  }
  out.ran = true;
  const Vector mu = run.oracle().full(w);
  const double eta = step_rule.next(run.oracle(), w, mu, run.rng());
  out.eta = eta;
  result.step_sizes.push_back(eta);
  state.reset();
  if (test) test->reset(state.trace_g());

  Vector x = w;
  Vector sum = Vector::Zero(w.size());
  for (std::size_t t = 1; t <= inner; ++t) {
    const auto batch = run.draw_batch();
    const Vector g = run.oracle().variance_reduced(x, w, mu, batch);
    state.accumulate(g);
    sum += x;
    ++out.steps;
    run.notify({k, t, x, g, &state, &w, &mu, batch, eta});
    if (test && test->push(state.trace_g())) {
      out.stopped_adaptively = true;
      run.observe(x, eta, state.g_norm_star(), k, TraceEvent::adaptive_stop);
      break;
    }
    if (!run.precond_move(state, x, g, eta, k)) break;
    if (!run.after_step(x, eta, state.g_norm_star(), k)) break;
  }

  if (snapshot == SnapshotRule::average && out.steps > 0) {
    out.snapshot = sum / static_cast<double>(out.steps);
  } else {
    out.snapshot = std::move(x);
  }
  result.inner_steps += out.steps;
  result.inner_loop_lengths.push_back(out.steps);
  ++result.outer_loops;
  if (out.stopped_adaptively) ++result.adaptive_stops;
  return out;
}

struct AdaptiveLoopsOutcome {
  Vector w;
  bool last_stopped_adaptively = false;
  double eta = 0.0;
  std::optional<double> gns;
};

AdaptiveLoopsOutcome adaptive_outer_loops(Run& run, Vector w, std::size_t outer_loops,
                                          std::size_t k_offset, const AdaptiveTermination& term,
                                          const PrecondVariant& variant, OuterStepSize& step_rule,
                                          SnapshotRule snapshot, RunResult& result) {
  const std::size_t epoch = run.epoch_steps();
  const std::size_t max_inner = term.max_inner ? term.max_inner : 10 * epoch;
  const std::size_t burn_in = term.burn_in ? term.burn_in : epoch;
  if (max_inner < burn_in) {
    throw std::invalid_argument("adaptive termination: max inner loops below the burn-in threshold");
  }
  PhaseTest test(term.theta, burn_in);
  PrecondState state(variant, run.dim());
  AdaptiveLoopsOutcome out;
  for (std::size_t k = 0; k < outer_loops; ++k) {
    auto o = adasvrg_outer_loop(run, w, k_offset + k, max_inner, &test, state, step_rule, snapshot, result);
    if (!o.ran) break;
    w = std::move(o.snapshot);
    out.last_stopped_adaptively = o.stopped_adaptively;
    out.eta = o.eta;
    out.gns = state.g_norm_star();
    if (run.halted()) break;
  }
  out.w = std::move(w);
  return out;
}

}  // namespace

RunResult adasvrg_fixed(const Problem& problem, const Vector& w0, const AdaSvrgConfig& config,
                        const RunOptions& options) {
  if (config.outer_loops == 0) throw std::invalid_argument("adasvrg_fixed: K must be >= 1");
  Run run(problem, w0, options);
  const std::size_t m = config.inner_loops ? config.inner_loops : run.epoch_steps();
  PrecondState state(config.variant, problem.dim());
  OuterStepSize step_rule(config.step);
  RunResult result;

  Vector w = w0;
  Vector snapshot_sum = Vector::Zero(w0.size());
  std::size_t snapshots = 0;
  double eta = 0.0;
  for (std::size_t k = 0; k < config.outer_loops; ++k) {
    auto o = adasvrg_outer_loop(run, w, k, m, nullptr, state, step_rule, config.snapshot, result);
    if (!o.ran) break;
    w = std::move(o.snapshot);
    eta = o.eta;
    snapshot_sum += w;
    ++snapshots;
    if (run.halted()) break;
  }
  if (config.snapshot == SnapshotRule::average && snapshots > 0) {
    result.averaged_iterate = snapshot_sum / static_cast<double>(snapshots);
  }
  const std::size_t outer = result.outer_loops;
  return run.finish(std::move(result), std::move(w), eta, state.g_norm_star(), outer);
}

RunResult adasvrg_multistage(const Problem& problem, const Vector& w0, const MultiStageConfig& config,
                             const RunOptions& options) {
  if (config.outer_loops_per_stage < 3) {
    throw std::invalid_argument("adasvrg_multistage: needs at least 3 outer loops per stage");
  }
  const auto schedule = multistage_schedule(config.epsilon);
  Run run(problem, w0, options);
  PrecondState state(config.variant, problem.dim());
  OuterStepSize step_rule(config.step);
  RunResult result;

  Vector stage_start = w0;
  double eta = 0.0;
  std::size_t k = 0;
  for (std::size_t m : schedule) {
    Vector w = stage_start;
    Vector sum = Vector::Zero(w0.size());
    std::size_t count = 0;
    for (std::size_t j = 0; j < config.outer_loops_per_stage; ++j, ++k) {
      auto o = adasvrg_outer_loop(run, w, k, m, nullptr, state, step_rule, config.snapshot, result);
      if (!o.ran) break;
      w = std::move(o.snapshot);
      eta = o.eta;
      sum += w;
      ++count;
      if (run.halted()) break;
    }
    if (count == 0) break;
    stage_start = sum / static_cast<double>(count);
    result.stage_iterates.push_back(stage_start);
    run.observe(stage_start, eta, state.g_norm_star(), k, TraceEvent::stage_boundary);
    if (run.halted()) break;
  }
  result.averaged_iterate = stage_start;
  const std::size_t outer = result.outer_loops;
  return run.finish(std::move(result), std::move(stage_start), eta, state.g_norm_star(), outer);
}

RunResult adasvrg_adaptive(const Problem& problem, const Vector& w0,
                           const AdaSvrgAdaptiveConfig& config, const RunOptions& options) {
  if (config.outer_loops == 0) throw std::invalid_argument("adasvrg_adaptive: K must be >= 1");
  Run run(problem, w0, options);
  OuterStepSize step_rule(config.step);
  RunResult result;
  auto o = adaptive_outer_loops(run, w0, config.outer_loops, 0, config.termination, config.variant,
                                step_rule, config.snapshot, result);
  if (o.last_stopped_adaptively) result.termination_reason = TerminationReason::adaptive_stop;
  const std::size_t outer = result.outer_loops;
  return run.finish(std::move(result), std::move(o.w), o.eta, o.gns, outer);
}

RunResult hybrid_adagrad_adasvrg(const Problem& problem, const Vector& x1, const HybridConfig& config,
                                 const RunOptions& options) {
  if (config.iterations == 0) throw std::invalid_argument("hybrid: T must be >= 1");
  Run run(problem, x1, options);
  const std::size_t epoch = run.epoch_steps();
  const std::size_t burn_in = config.switch_burn_in ? config.switch_burn_in : 2 * epoch;
  PhaseTest test(config.termination.theta, burn_in);
  PrecondState state(config.variant, problem.dim());
  test.reset(state.trace_g());
  OuterStepSize step_rule(config.step);
  RunResult result;

  Vector x = x1;
  double eta = config.step.eta;
  std::optional<std::size_t> switched_at;
  std::size_t t = 0;
  while (t < config.iterations) {
    if (run.exhausted()) {
      run.halt(TerminationReason::budget);
      break;
    }
    ++t;
    if ((t - 1) % epoch == 0 && config.step.kind == StepSizeKind::heuristic) {
      const Vector grad = run.oracle().full(x);
      eta = step_rule.next(run.oracle(), x, grad, run.rng());
      result.step_sizes.push_back(eta);
    }
    const auto batch = run.draw_batch();
    const Vector g = run.oracle().batch(x, batch);
    state.accumulate(g);
    result.g_norm_star_history.push_back(state.g_norm_star());
    ++result.inner_steps;
    run.notify({(t - 1) / epoch, t, x, g, &state, nullptr, nullptr, batch, eta});
    if (test.push(state.trace_g())) {
      switched_at = t;
      break;
    }
    if (!run.precond_move(state, x, g, eta, (t - 1) / epoch)) break;
    if (!run.after_step(x, eta, state.g_norm_star(), (t - 1) / epoch)) break;
  }

  std::size_t outer = t / epoch;
  std::optional<double> gns = state.g_norm_star();
  if (switched_at && !run.halted()) {
    result.switch_iteration = switched_at;
    run.observe(x, eta, gns, outer, TraceEvent::switch_phase);
    const std::size_t remaining =
        config.iterations == kUnbounded ? kUnbounded : (config.iterations - *switched_at) / epoch;
    if (remaining > 0 && !run.halted()) {
      const bool shared = config.adasvrg_step.kind == config.step.kind &&
                          (config.step.kind == StepSizeKind::heuristic || config.adasvrg_step.eta == config.step.eta);
      OuterStepSize phase2_rule(config.adasvrg_step);
      auto o = adaptive_outer_loops(run, x, remaining, outer, config.termination, config.variant,
                                    shared ? step_rule : phase2_rule, config.snapshot, result);
      x = std::move(o.w);
      eta = o.eta;
      gns = o.gns;
      outer += result.outer_loops;
    }
  }
  return run.finish(std::move(result), std::move(x), eta, gns, outer);
}

namespace {

// One SVRG outer loop with Euclidean steps; returns the snapshot.
OuterLoopOutcome svrg_outer_loop(Run& run, const Vector& w, std::size_t k, std::size_t inner,
                                 double eta, SnapshotRule snapshot, RunResult& result) {
  OuterLoopOutcome out;
  out.snapshot = w;
  if (run.halted()) return out;
  if (run.exhausted()) {
    run.halt(TerminationReason::budget);
    return out;
  }
  out.ran = true;
  out.eta = eta;
  const Vector mu = run.oracle().full(w);
  Vector x = w;
  Vector sum = Vector::Zero(w.size());
  for (std::size_t t = 1; t <= inner; ++t) {
    const auto batch = run.draw_batch();
    const Vector g = run.oracle().variance_reduced(x, w, mu, batch);
    sum += x;
    ++out.steps;
    run.notify({k, t, x, g, nullptr, &w, &mu, batch, eta});
    run.euclidean_move(x, g, eta);
    if (!run.after_step(x, eta, std::nullopt, k)) break;
  }
  if (snapshot == SnapshotRule::average && out.steps > 0) {
    out.snapshot = sum / static_cast<double>(out.steps);
  } else {
    out.snapshot = std::move(x);
  }
  result.inner_steps += out.steps;
  result.inner_loop_lengths.push_back(out.steps);
  ++result.outer_loops;
  return out;
}

void check_step(double eta, const char* who) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument(std::string(who) + ": step size must be finite and >= 0");
  }
}

}  // namespace

RunResult svrg(const Problem& problem, const Vector& w0, const SvrgConfig& config,
               const RunOptions& options) {
  check_step(config.eta, "svrg");
  if (config.outer_loops == 0) throw std::invalid_argument("svrg: K must be >= 1");
  Run run(problem, w0, options);
  const std::size_t m = config.inner_loops ? config.inner_loops : run.epoch_steps();
  RunResult result;
  Vector w = w0;
  Vector snapshot_sum = Vector::Zero(w0.size());
  std::size_t snapshots = 0;
  for (std::size_t k = 0; k < config.outer_loops; ++k) {
    auto o = svrg_outer_loop(run, w, k, m, config.eta, config.snapshot, result);
    if (!o.ran) break;
    w = std::move(o.snapshot);
    snapshot_sum += w;
    ++snapshots;
    result.step_sizes.push_back(config.eta);
    if (run.halted()) break;
  }
  if (config.snapshot == SnapshotRule::average && snapshots > 0) {
    result.averaged_iterate = snapshot_sum / static_cast<double>(snapshots);
  }
  const std::size_t outer = result.outer_loops;
  return run.finish(std::move(result), std::move(w), config.eta, std::nullopt, outer);
}

RunResult svrg_bb(const Problem& problem, const Vector& w0, const SvrgBbConfig& config,
                  const RunOptions& options) {
  if (!(config.eta0 > 0.0)) throw std::invalid_argument("svrg_bb: eta0 must be > 0");
  if (config.outer_loops == 0) throw std::invalid_argument("svrg_bb: K must be >= 1");
  Run run(problem, w0, options);
  const std::size_t m = config.inner_loops ? config.inner_loops : run.epoch_steps();
  RunResult result;

  Vector w = w0;
  std::optional<Vector> prev_w, prev_grad;
  double eta = config.eta0;
  for (std::size_t k = 0; k < config.outer_loops; ++k) {
    if (run.exhausted()) {
      run.halt(TerminationReason::budget);
      break;
    }
    // Uncharged: svrg_outer_loop evaluates (and charges) the same gradient.
    const Vector grad = problem.gradient(w);
    if (prev_w) {
      const Vector s = w - *prev_w;
      const double curvature = s.dot(grad - *prev_grad);
      if (s.squaredNorm() > 0.0 && curvature > 0.0) {
        eta = s.squaredNorm() / (static_cast<double>(m) * curvature);
      } else {
        ++result.step_fallbacks;
        run.observe(w, eta, std::nullopt, k, TraceEvent::step_fallback);
      }
    }
    prev_w = w;
    prev_grad = grad;
    result.step_sizes.push_back(eta);
    auto o = svrg_outer_loop(run, w, k, m, eta, SnapshotRule::last, result);
    if (!o.ran) break;
    w = std::move(o.snapshot);
    if (run.halted()) break;
  }
  const std::size_t outer = result.outer_loops;
  return run.finish(std::move(result), std::move(w), eta, std::nullopt, outer);
}

RunResult sarah(const Problem& problem, const Vector& w0, const SarahConfig& config,
                const RunOptions& options) {
  check_step(config.eta, "sarah");
  if (config.outer_loops == 0) throw std::invalid_argument("sarah: K must be >= 1");
  Run run(problem, w0, options);
  const std::size_t m = config.inner_loops ? config.inner_loops : run.epoch_steps();
  RunResult result;

  Vector w = w0;
  for (std::size_t k = 0; k < config.outer_loops && !run.halted(); ++k) {
    if (run.exhausted()) {
      run.halt(TerminationReason::budget);
      break;
    }
    Vector v = run.oracle().full(w);
    Vector x_prev = w;
    Vector x = w;
    run.notify({k, 0, x, v, nullptr, &w, &v, {}, config.eta});
    run.euclidean_move(x, v, config.eta);
    std::size_t steps = 0;
    if (run.after_step(x, config.eta, std::nullopt, k)) {
      for (std::size_t t = 1; t <= m; ++t) {
        const auto batch = run.draw_batch();
        v = run.oracle().variance_reduced(x, x_prev, v, batch);
        ++steps;
        run.notify({k, t, x, v, nullptr, &x_prev, nullptr, batch, config.eta});
        x_prev = x;
        run.euclidean_move(x, v, config.eta);
        if (!run.after_step(x, config.eta, std::nullopt, k)) break;
      }
    }
    w = std::move(x);
    result.inner_steps += steps;
    result.inner_loop_lengths.push_back(steps);
    result.step_sizes.push_back(config.eta);
    ++result.outer_loops;
  }
  const std::size_t outer = result.outer_loops;
  return run.finish(std::move(result), std::move(w), config.eta, std::nullopt, outer);
}

RunResult loopless_svrg(const Problem& problem, const Vector& w0, const LooplessSvrgConfig& config,
                        const RunOptions& options) {
  check_step(config.eta, "loopless_svrg");
  Run run(problem, w0, options);
  const double p = config.refresh_probability > 0.0
                       ? config.refresh_probability
                       : static_cast<double>(options.batch_size) / static_cast<double>(problem.size());
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("loopless_svrg: p must be in (0, 1]");
  const std::size_t epoch = run.epoch_steps();
  RunResult result;

  Vector x = w0;
  Vector w = w0;
  Vector mu;
  if (!run.exhausted()) {
    mu = run.oracle().full(w);
  } else {
    run.halt(TerminationReason::budget);
  }
  Rng coin = Rng::stream(options.seed, 0xc017);
  for (std::size_t t = 1; t <= config.iterations && !run.halted(); ++t) {
    if (run.exhausted()) {
      run.halt(TerminationReason::budget);
      break;
    }
    if (coin.uniform() < p) {
      w = x;
      mu = run.oracle().full(w);
      ++result.snapshot_refreshes;
    }
    const auto batch = run.draw_batch();
    const Vector g = run.oracle().variance_reduced(x, w, mu, batch);
    ++result.inner_steps;
    run.notify({(t - 1) / epoch, t, x, g, nullptr, &w, &mu, batch, config.eta});
    run.euclidean_move(x, g, config.eta);
    if (!run.after_step(x, config.eta, std::nullopt, (t - 1) / epoch)) break;
  }
  result.step_sizes.push_back(config.eta);
  const std::size_t outer = result.inner_steps / epoch;
  return run.finish(std::move(result), std::move(x), config.eta, std::nullopt, outer);
}

RunResult adagrad(const Problem& problem, const Vector& x1, const AdagradConfig& config,
                  const RunOptions& options) {
  if (config.step.kind == StepSizeKind::constant && !(config.step.eta > 0.0)) {
    throw std::invalid_argument("adagrad: step size must be > 0");
  }
  Run run(problem, x1, options);
  const std::size_t epoch = run.epoch_steps();
  const std::size_t refresh = config.step_refresh ? config.step_refresh : epoch;
  PrecondState state(config.variant, problem.dim());
  OuterStepSize step_rule(config.step);
  RunResult result;

  Vector x = x1;
  double eta = config.step.eta;
  if (config.step.kind == StepSizeKind::constant) result.step_sizes.push_back(eta);
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    if (run.exhausted()) {
      run.halt(TerminationReason::budget);
      break;
    }
    if (config.step.kind == StepSizeKind::heuristic && (t - 1) % refresh == 0) {
      const Vector grad = run.oracle().full(x);
      eta = step_rule.next(run.oracle(), x, grad, run.rng());
      result.step_sizes.push_back(eta);
    }
    const auto batch = run.draw_batch();
    const Vector g = run.oracle().batch(x, batch);
    state.accumulate(g);
    result.g_norm_star_history.push_back(state.g_norm_star());
    ++result.inner_steps;
    run.notify({(t - 1) / epoch, t, x, g, &state, nullptr, nullptr, batch, eta});
    if (!run.precond_move(state, x, g, eta, (t - 1) / epoch)) break;
    if (!run.after_step(x, eta, state.g_norm_star(), (t - 1) / epoch)) break;
  }
  const std::size_t outer = result.inner_steps / epoch;
  return run.finish(std::move(result), std::move(x), eta, state.g_norm_star(), outer);
}

RunResult sgd(const Problem& problem, const Vector& x1, const SgdConfig& config,
              const RunOptions& options) {
  check_step(config.eta, "sgd");
  Run run(problem, x1, options);
  const std::size_t epoch = run.epoch_steps();
  RunResult result;
  Vector x = x1;
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    if (run.exhausted()) {
      run.halt(TerminationReason::budget);
      break;
    }
    const auto batch = run.draw_batch();
    const Vector g = run.oracle().batch(x, batch);
    ++result.inner_steps;
    run.notify({(t - 1) / epoch, t, x, g, nullptr, nullptr, nullptr, batch, config.eta});
    run.euclidean_move(x, g, config.eta);
    if (!run.after_step(x, config.eta, std::nullopt, (t - 1) / epoch)) break;
  }
  result.step_sizes.push_back(config.eta);
  const std::size_t outer = result.inner_steps / epoch;
  return run.finish(std::move(result), std::move(x), config.eta, std::nullopt, outer);
}

}  // namespace vrkit

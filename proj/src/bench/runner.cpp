#include "vrkit/bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "vrkit/libsvm.hpp"
#include "vrkit/rng.hpp"

namespace vrkit::bench {

namespace fs = std::filesystem;

namespace {

PrecondVariant variant_of(const RunConfig& c) {
  switch (c.variant) {
    case PrecondKind::scalar: return PrecondVariant::scalar();
    case PrecondKind::diagonal: return PrecondVariant::diagonal(c.delta);
    case PrecondKind::full_matrix: return PrecondVariant::full_matrix(c.delta);
  }
  return PrecondVariant::scalar();
}

StepSizeRule step_of(const RunConfig& c) {
  return c.eta ? StepSizeRule::constant(*c.eta) : StepSizeRule::heuristic();
}

AdaptiveTermination termination_of(const RunConfig& c) {
  return {.theta = c.theta, .max_inner = c.max_inner, .burn_in = c.burn_in};
}

SnapshotRule snapshot_of(const RunConfig& c) {
  return c.average_snapshot ? SnapshotRule::average : SnapshotRule::last;
}

RunOptions options_of(const RunConfig& c, std::uint64_t seed) {
  RunOptions o;
  o.seed = seed;
  o.batch_size = c.batch_size;
  o.max_passes = c.epochs;
  if (c.radius) o.projection = ProjectionSpec::l2_ball(*c.radius);
  return o;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Problem load_problem(const RunConfig& config) {
  std::shared_ptr<Dataset> data;
  if (config.dataset == "synthetic") {
    data = std::make_shared<Dataset>(gen_separable(config.synthetic).data);
  } else {
    data = std::make_shared<Dataset>(load_libsvm(config.dataset));
  }
  const double l2 = config.l2.value_or(1.0 / static_cast<double>(data->size()));
  return Problem(std::move(data), Loss{config.loss, config.huber_delta}, l2);
}

RunResult run_one(const Problem& problem, const RunConfig& c, std::uint64_t seed) {
  const Vector w0 = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  const RunOptions opts = options_of(c, seed);
  if (uses_eta(c.algo) && !c.eta) {
    throw std::invalid_argument("algorithm '" + std::string(to_string(c.algo)) +
                                "' needs a step size (--eta) or the grid subcommand");
  }
  switch (c.algo) {
    case Algo::sgd: return sgd(problem, w0, {.eta = *c.eta}, opts);
    case Algo::adagrad:
      return adagrad(problem, w0, {.variant = variant_of(c), .step = step_of(c)}, opts);
    case Algo::svrg:
      return svrg(problem, w0, {.inner_loops = c.inner_loops, .eta = *c.eta, .snapshot = snapshot_of(c)}, opts);
    case Algo::lsvrg:
      return loopless_svrg(problem, w0, {.eta = *c.eta, .refresh_probability = c.lsvrg_p}, opts);
    case Algo::sarah: return sarah(problem, w0, {.inner_loops = c.inner_loops, .eta = *c.eta}, opts);
    case Algo::svrg_bb:
      return svrg_bb(problem, w0, {.inner_loops = c.inner_loops, .eta0 = c.eta.value_or(c.eta0)}, opts);
    case Algo::adasvrg:
      return adasvrg_fixed(problem, w0,
                           {.inner_loops = c.inner_loops, .variant = variant_of(c), .step = step_of(c),
                            .snapshot = snapshot_of(c)},
                           opts);
    case Algo::adasvrg_ms:
      return adasvrg_multistage(problem, w0,
                                {.outer_loops_per_stage = c.outer_per_stage, .epsilon = c.epsilon,
                                 .variant = variant_of(c), .step = step_of(c)},
                                opts);
    case Algo::adasvrg_at:
      return adasvrg_adaptive(problem, w0,
                              {.termination = termination_of(c), .variant = variant_of(c), .step = step_of(c),
                               .snapshot = snapshot_of(c)},
                              opts);
    case Algo::hybrid:
      return hybrid_adagrad_adasvrg(problem, w0,
                                    {.termination = termination_of(c), .variant = variant_of(c),
                                     .step = step_of(c), .adasvrg_step = StepSizeRule::heuristic(),
                                     .snapshot = snapshot_of(c)},
                                    opts);
  }
  throw std::logic_error("unhandled algorithm");
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t j = 0; j < jobs; ++j) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

std::size_t SeedRuns::diverged_seeds() const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const RunResult& r) { return r.diverged(); }));
}

namespace {

Aggregate aggregate_results(const std::vector<RunResult>& results) {
  std::vector<Trace> traces;
  traces.reserve(results.size());
  for (const auto& r : results) traces.push_back(r.trace);
  return aggregate(traces);
}

}  // namespace

SeedRuns run_seeds(const Problem& problem, const RunConfig& config) {
  if (config.seeds.empty()) throw std::invalid_argument("no seeds configured");
  SeedRuns runs;
  runs.seeds = config.seeds;
  runs.results.resize(config.seeds.size());
  parallel_for(config.seeds.size(), resolve_jobs(config),
               [&](std::size_t i) { runs.results[i] = run_one(problem, config, config.seeds[i]); });
  runs.aggregate = aggregate_results(runs.results);
  return runs;
}

std::string seed_file_stem(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

void write_runs(const std::string& dir, const RunConfig& config, const SeedRuns& runs) {
  const fs::path root(dir);
  fs::create_directories(root);
  std::string summary;
  for (std::size_t i = 0; i < runs.results.size(); ++i) {
    const auto& r = runs.results[i];
    const std::string stem = seed_file_stem(runs.seeds[i]);
    write_file(root / (stem + ".csv"), r.trace.to_csv());
    write_file(root / (stem + ".jsonl"), r.trace.to_jsonl());
    summary += stem + ".termination = " + std::string(to_string(r.termination_reason)) + "\n";
  }
  write_file(root / "aggregate.csv", runs.aggregate.to_csv());
  write_file(root / "config.txt", to_config_text(config));
  const auto& last = runs.aggregate.rows.back();
  summary = "algo = " + std::string(to_string(config.algo)) + "\n" +
            "final_pass = " + format_double(last.pass) + "\n" +
            "final_grad_norm = " + format_double(last.grad_norm_median) + "\n" +
            "final_objective = " + format_double(last.objective_median) + "\n" +
            "diverged_seeds = " + std::to_string(runs.diverged_seeds()) + "\n" + summary;
  write_file(root / "summary.txt", summary);
}

Aggregate aggregate_directory(const std::string& dir) {
  static const std::regex pattern(R"(seed_(\d+)\.csv)");
  std::vector<std::pair<std::uint64_t, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) files.emplace_back(std::stoull(m[1]), entry.path());
  }
  if (files.empty()) throw std::runtime_error("no seed traces in '" + dir + "'");
  std::sort(files.begin(), files.end());
  std::vector<Trace> traces;
  for (const auto& [seed, path] : files) traces.push_back(Trace::from_csv(read_file(path)));
  return aggregate(traces);
}

GridResult grid_search(const Problem& problem, const RunConfig& config, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
  if (config.seeds.empty()) throw std::invalid_argument("no seeds configured");
  GridResult out;
  out.entries.resize(grid.size());
  const std::size_t seeds = config.seeds.size();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out.entries[g].eta = grid[g];
    out.entries[g].runs.seeds = config.seeds;
    out.entries[g].runs.results.resize(seeds);
  }
  parallel_for(grid.size() * seeds, resolve_jobs(config), [&](std::size_t job) {
    const std::size_t g = job / seeds, s = job % seeds;
    RunConfig c = config;
    c.eta = grid[g];
    out.entries[g].runs.results[s] = run_one(problem, c, config.seeds[s]);
  });
  for (auto& e : out.entries) {
    e.runs.aggregate = aggregate_results(e.runs.results);
    e.final_metric = e.runs.aggregate.final_grad_norm();
    if (std::isnan(e.final_metric)) e.final_metric = std::numeric_limits<double>::infinity();
  }
  auto key = [](const GridEntry& e) { return std::make_tuple(e.final_metric, e.runs.diverged_seeds(), e.eta); };
  for (std::size_t g = 1; g < out.entries.size(); ++g) {
    if (key(out.entries[g]) < key(out.entries[out.best])) out.best = g;
  }
  return out;
}

SwitchSearchResult manual_switch_search(const Problem& problem, const RunConfig& config,
                                        std::span<const std::size_t> epochs) {
  if (config.seeds.empty()) throw std::invalid_argument("no seeds configured");
  SwitchSearchResult out;
  out.candidates.push_back({std::nullopt, {}, 0.0});
  for (std::size_t e : epochs) {
    if (e == 0) throw std::invalid_argument("switch epochs start at 1");
    out.candidates.push_back({e, {}, 0.0});
  }
  const std::size_t seeds = config.seeds.size();
  for (auto& c : out.candidates) c.final_losses.resize(seeds);

  const Vector w0 = Vector::Zero(static_cast<Eigen::Index>(problem.dim()));
  const PrecondVariant variant = variant_of(config);
  const StepSizeRule step = step_of(config);
  parallel_for(out.candidates.size() * seeds, resolve_jobs(config), [&](std::size_t job) {
    auto& cand = out.candidates[job / seeds];
    const std::size_t s = job % seeds;
    RunOptions opts = options_of(config, config.seeds[s]);
    if (cand.epoch) opts.max_passes = std::min(config.epochs, static_cast<double>(*cand.epoch));
    const RunResult first = adagrad(problem, w0, {.variant = variant, .step = step}, opts);
    Vector w = first.final_iterate;
    const double used = first.counters.passes(problem.size());
    if (cand.epoch && !first.diverged() && used < config.epochs) {
      RunOptions rest = options_of(config, splitmix64(config.seeds[s]));
      rest.max_passes = config.epochs - used;
      const RunResult second =
          adasvrg_fixed(problem, w, {.inner_loops = config.inner_loops, .variant = variant, .step = step}, rest);
      w = second.diverged() ? Vector::Constant(w.size(), std::nan("")) : second.final_iterate;
    } else if (first.diverged()) {
      w = Vector::Constant(w.size(), std::nan(""));
    }
    cand.final_losses[s] = problem.value(w);
  });
  for (auto& c : out.candidates) c.final_loss = median(c.final_losses);
  for (std::size_t i = 1; i < out.candidates.size(); ++i) {
    if (out.candidates[i].final_loss < out.candidates[out.best].final_loss) out.best = i;
  }
  return out;
}

}  // namespace vrkit::bench

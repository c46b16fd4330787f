#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vrkit/bench/aggregate.hpp"
#include "vrkit/bench/config.hpp"
#include "vrkit/optimizers.hpp"

namespace vrkit::bench {

// Dataset from config.dataset (LIBSVM path or "synthetic") with lambda = 1/n
// unless config.l2 is set.
Problem load_problem(const RunConfig& config);

// One seed from w0 = 0 with a budget of config.epochs effective passes.
RunResult run_one(const Problem& problem, const RunConfig& config, std::uint64_t seed);

// Calls fn(0..count-1) on up to `jobs` threads. Exceptions are rethrown.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

struct SeedRuns {
  std::vector<std::uint64_t> seeds;
  std::vector<RunResult> results;
  Aggregate aggregate;
  std::size_t diverged_seeds() const;
};

SeedRuns run_seeds(const Problem& problem, const RunConfig& config);

// Writes seed_<s>.csv / seed_<s>.jsonl, aggregate.csv, config.txt and
// summary.txt under `dir`.
void write_runs(const std::string& dir, const RunConfig& config, const SeedRuns& runs);

// Rebuilds the aggregate from the seed_<s>.csv files in `dir`.
Aggregate aggregate_directory(const std::string& dir);

struct GridEntry {
  double eta = 0.0;
  SeedRuns runs;
  double final_metric = 0.0;  // median grad norm at the last common pass
};

struct GridResult {
  std::size_t best = 0;
  std::vector<GridEntry> entries;
  double best_eta() const { return entries.at(best).eta; }
};

// Runs every grid value as the constant step size (eta0 for SVRG-BB). Best is
// the smallest final metric, then fewest diverged seeds, then smaller eta.
GridResult grid_search(const Problem& problem, const RunConfig& config, std::span<const double> grid);

struct SwitchCandidate {
  std::optional<std::size_t> epoch;  // nullopt: never switch
  std::vector<double> final_losses;  // per seed
  double final_loss = 0.0;           // median
};

struct SwitchSearchResult {
  std::size_t best = 0;
  std::vector<SwitchCandidate> candidates;
  const SwitchCandidate& best_candidate() const { return candidates.at(best); }
};

// AdaGrad for s passes, then AdaSVRG (fixed m = n / b) for the remaining
// budget, for every s in `epochs`; also AdaGrad alone for the whole budget.
// Best minimises the median final objective; ties go to never-switching, then
// the earlier epoch.
SwitchSearchResult manual_switch_search(const Problem& problem, const RunConfig& config,
                                        std::span<const std::size_t> epochs);

std::string seed_file_stem(std::uint64_t seed);

}  // namespace vrkit::bench

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vrkit/precond.hpp"
#include "vrkit/problem.hpp"
#include "vrkit/synthetic.hpp"

namespace vrkit::bench {

enum class Algo { sgd, adagrad, svrg, lsvrg, sarah, svrg_bb, adasvrg, adasvrg_ms, adasvrg_at, hybrid };

std::string_view to_string(Algo algo);
Algo parse_algo(std::string_view name);
bool uses_eta(Algo algo);

// One benchmark configuration. Seeds run independently over the same problem.
struct RunConfig {
  // LIBSVM path, or "synthetic" for gen_separable(synthetic).
  std::string dataset = "synthetic";
  SyntheticSpec synthetic{.n = 2000, .d = 50, .mislabel_fraction = 0.0, .margin = 0.1, .seed = 0};
  LossKind loss = LossKind::logistic;
  double huber_delta = 1.0;
  std::optional<double> l2;  // unset selects 1 / n

  Algo algo = Algo::adasvrg;
  PrecondKind variant = PrecondKind::scalar;
  double delta = 1e-8;
  std::size_t batch_size = 64;
  double epochs = 50.0;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};

  // Constant step size; unset means the heuristic for adaptive methods and an
  // error for methods that need one.
  std::optional<double> eta;
  double eta0 = 0.1;  // SVRG-BB first outer loop
  double theta = 0.5;
  std::size_t max_inner = 0;
  std::size_t burn_in = 0;
  std::size_t inner_loops = 0;
  double epsilon = 0.125;
  std::size_t outer_per_stage = 3;
  double lsvrg_p = 0.0;
  bool average_snapshot = false;
  std::optional<double> radius;  // l2-ball projection

  std::vector<double> grid{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  std::string out = "vrkit-out";
  std::size_t jobs = 0;  // 0: VRKIT_JOBS or hardware concurrency
};

// Sets one key; throws std::invalid_argument on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat `key = value` lines; '#' starts a comment.
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::string& path);

// Key/value listing of every setting, in apply_setting syntax.
std::map<std::string, std::string> describe(const RunConfig& config);
std::string to_config_text(const RunConfig& config);

std::vector<std::uint64_t> parse_seeds(std::string_view text);
std::vector<double> parse_grid(std::string_view text);

// Worker count: config.jobs, else $VRKIT_JOBS, else hardware concurrency.
std::size_t resolve_jobs(const RunConfig& config);

}  // namespace vrkit::bench

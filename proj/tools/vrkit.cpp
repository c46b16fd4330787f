#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vrkit/bench/checks.hpp"
#include "vrkit/bench/config.hpp"
#include "vrkit/bench/plot.hpp"
#include "vrkit/bench/runner.hpp"
#include "vrkit/libsvm.hpp"
#include "vrkit/synthetic.hpp"

namespace fs = std::filesystem;
using namespace vrkit;
using namespace vrkit::bench;

namespace {

// Flags shared by run, grid and switch-search, applied over the config file.
struct ConfigFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::optional<std::string>>> flags{
      {"dataset", {}}, {"loss", {}},  {"algo", {}},  {"variant", {}}, {"batch_size", {}},
      {"epochs", {}},  {"seeds", {}}, {"eta", {}},   {"theta", {}},   {"out", {}},
      {"l2", {}},      {"grid", {}},  {"jobs", {}},
  };
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "flat key = value config file");
    for (auto& [key, value] : flags) {
      std::string flag = "--" + key;
      for (char& c : flag) {
        if (c == '_') c = '-';
      }
      app->add_option(flag, value, "overrides config key '" + key + "'");
    }
    app->add_option("--set", sets, "extra key=value overrides (repeatable)");
  }

  RunConfig build() const {
    RunConfig c;
    if (!config_file.empty()) apply_config_file(c, config_file);
    for (const auto& [key, value] : flags) {
      if (value) apply_setting(c, key, *value);
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return c;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every non-finite trace row must carry the diverged flag.
bool all_flagged(const std::vector<RunResult>& results) {
  for (const auto& r : results) {
    for (const auto& row : r.trace.rows()) {
      if (!std::isfinite(row.objective) && row.event != TraceEvent::diverged) return false;
    }
  }
  return true;
}

int cmd_run(const ConfigFlags& flags) {
  const RunConfig config = flags.build();
  const Problem problem = load_problem(config);
  const SeedRuns runs = run_seeds(problem, config);
  write_runs(config.out, config, runs);
  const auto& last = runs.aggregate.rows.back();
  std::cout << to_string(config.algo) << ": n=" << problem.size() << " d=" << problem.dim()
            << " seeds=" << runs.seeds.size() << " pass=" << last.pass
            << " median_grad_norm=" << format_double(last.grad_norm_median)
            << " median_objective=" << format_double(last.objective_median)
            << " diverged=" << runs.diverged_seeds() << "\n"
            << "wrote " << config.out << "\n";
  return all_flagged(runs.results) ? 0 : 2;
}

std::string eta_dir(double eta) { return "eta_" + format_double(eta); }

int cmd_grid(const ConfigFlags& flags) {
  const RunConfig config = flags.build();
  const Problem problem = load_problem(config);
  const GridResult grid = grid_search(problem, config, config.grid);
  std::string table = "eta,final_grad_norm,diverged_seeds,best\n";
  bool flagged = true;
  for (std::size_t i = 0; i < grid.entries.size(); ++i) {
    const auto& e = grid.entries[i];
    RunConfig c = config;
    c.eta = e.eta;
    write_runs((fs::path(config.out) / eta_dir(e.eta)).string(), c, e.runs);
    table += format_double(e.eta) + "," + format_double(e.final_metric) + "," +
             std::to_string(e.runs.diverged_seeds()) + "," + (i == grid.best ? "1" : "0") + "\n";
    std::cout << "eta=" << format_double(e.eta) << " final_grad_norm=" << format_double(e.final_metric)
              << " diverged=" << e.runs.diverged_seeds() << (i == grid.best ? "  <- best" : "") << "\n";
    flagged = flagged && all_flagged(e.runs.results);
  }
  write_text(fs::path(config.out) / "grid.csv", table);
  std::cout << "best eta " << format_double(grid.best_eta()) << "\n";
  return flagged ? 0 : 2;
}

int cmd_switch(const ConfigFlags& flags, std::vector<std::size_t> epochs) {
  const RunConfig config = flags.build();
  const Problem problem = load_problem(config);
  if (epochs.empty()) {
    for (std::size_t e = 1; e <= static_cast<std::size_t>(config.epochs); ++e) epochs.push_back(e);
  }
  const SwitchSearchResult result = manual_switch_search(problem, config, epochs);
  std::string table = "switch_epoch,final_loss,best\n";
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const auto& c = result.candidates[i];
    table += (c.epoch ? std::to_string(*c.epoch) : std::string("never")) + "," + format_double(c.final_loss) +
             "," + (i == result.best ? "1" : "0") + "\n";
  }
  write_text(fs::path(config.out) / "switch.csv", table);
  const auto& best = result.best_candidate();
  std::cout << "best switch epoch: " << (best.epoch ? std::to_string(*best.epoch) : std::string("never"))
            << " (median final loss " << format_double(best.final_loss) << ")\n";
  return 0;
}

int cmd_plot(const std::vector<std::string>& inputs, std::vector<std::string> labels, const std::string& out,
             PlotOptions options, bool objective) {
  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    fs::path p(inputs[i]);
    if (fs::is_directory(p)) p /= "aggregate.csv";
    const Aggregate agg = Aggregate::from_csv(read_text(p));
    std::string label = i < labels.size() ? labels[i] : p.parent_path().filename().string();
    if (label.empty()) label = p.stem().string();
    series.push_back(series_from_aggregate(agg, label, objective));
  }
  if (objective) options.y_label = "objective";
  write_text(out, render_svg(series, options));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_gen_data(const SyntheticSpec& spec, const std::string& out) {
  const SyntheticData data = gen_separable(spec);
  save_libsvm(out, data.data);
  std::cout << "wrote " << out << " (n=" << data.data.size() << ", d=" << data.data.dim()
            << ", flipped=" << data.flipped.size() << ")\n";
  return 0;
}

int cmd_check(std::uint64_t seed) {
  bool ok = true;
  for (const auto& r : run_checks(seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vrkit: variance-reduced AdaGrad benchmarks"};
  app.require_subcommand(1);

  ConfigFlags run_flags, grid_flags, switch_flags;
  auto* run = app.add_subcommand("run", "run one configuration over all seeds");
  run_flags.attach(run);
  auto* grid = app.add_subcommand("grid", "grid-search the constant step size");
  grid_flags.attach(grid);
  auto* sw = app.add_subcommand("switch-search", "search the AdaGrad -> AdaSVRG switch epoch");
  switch_flags.attach(sw);
  std::vector<std::size_t> switch_epochs;
  sw->add_option("--switch-epochs", switch_epochs, "candidate epochs (default 1..epochs)")->delimiter(',');

  auto* plot = app.add_subcommand("plot", "render aggregates as SVG");
  std::vector<std::string> plot_inputs, plot_labels;
  std::string plot_out = "plot.svg";
  PlotOptions plot_options;
  bool plot_objective = false, plot_linear = false;
  plot->add_option("inputs", plot_inputs, "aggregate.csv files or run directories")->required();
  plot->add_option("--out", plot_out, "output SVG path");
  plot->add_option("--label", plot_labels, "series labels, in input order");
  plot->add_option("--title", plot_options.title);
  plot->add_flag("--sensitivity", plot_options.sensitivity, "cap plotted values at 10");
  plot->add_flag("--objective", plot_objective, "plot the objective instead of the gradient norm");
  plot->add_flag("--linear", plot_linear, "linear y axis");

  auto* gen = app.add_subcommand("gen-data", "write a synthetic separable dataset in LIBSVM format");
  SyntheticSpec spec;
  std::string gen_out = "synthetic.libsvm";
  gen->add_option("--n", spec.n)->capture_default_str();
  gen->add_option("--d", spec.d)->capture_default_str();
  gen->add_option("--mislabel", spec.mislabel_fraction)->capture_default_str();
  gen->add_option("--margin", spec.margin)->capture_default_str();
  gen->add_option("--seed", spec.seed)->capture_default_str();
  gen->add_option("--out", gen_out)->capture_default_str();

  auto* check = app.add_subcommand("check", "run the invariant suites");
  std::uint64_t check_seed = 0;
  check->add_option("--seed", check_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_flags);
    if (*grid) return cmd_grid(grid_flags);
    if (*sw) return cmd_switch(switch_flags, switch_epochs);
    if (*plot) {
      plot_options.log_y = !plot_linear;
      return cmd_plot(plot_inputs, plot_labels, plot_out, plot_options, plot_objective);
    }
    if (*gen) return cmd_gen_data(spec, gen_out);
    if (*check) return cmd_check(check_seed);
  } catch (const std::exception& e) {
    std::cerr << "vrkit: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vrkit/bench/aggregate.hpp"
#include "vrkit/bench/config.hpp"
#include "vrkit/bench/plot.hpp"
#include "vrkit/bench/runner.hpp"

namespace vrkit::bench {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vrkit_bench_test_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small_config() {
  RunConfig c;
  c.synthetic = {.n = 200, .d = 8, .mislabel_fraction = 0.1, .margin = 0.1, .seed = 3};
  c.batch_size = 8;
  c.epochs = 6;
  c.seeds = {0, 1, 2};
  c.jobs = 2;
  return c;
}

Problem quadratic(double c) {
  auto data = std::make_shared<Dataset>(1);
  const std::uint32_t idx[] = {0};
  const double val[] = {std::sqrt(c)};
  data->append_row(idx, val, 1.0);
  return Problem(data, {LossKind::squared}, 0.0);
}

TEST(ConfigTest, DefaultsFollowTheProtocol) {
  const RunConfig c;
  EXPECT_FALSE(c.l2.has_value());
  EXPECT_EQ(c.epochs, 50.0);
  EXPECT_EQ(c.seeds.size(), 5u);
  EXPECT_EQ(c.grid, (std::vector<double>{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}));
  EXPECT_EQ(c.theta, 0.5);
  const Problem p = load_problem(small_config());
  EXPECT_DOUBLE_EQ(p.l2_reg(), 1.0 / 200.0);
}

TEST(ConfigTest, ParsesFlatKeyValueText) {
  RunConfig c;
  apply_config_text(c, "# comment\nalgo = svrg-bb\nloss=squared-hinge  # trailing\n\nbatch_size = 128\n"
                       "seeds = 3\ngrid = 0.5, 2\neta = 0.25\nvariant = diag\nl2 = 0\nsnapshot = average\n");
  EXPECT_EQ(c.algo, Algo::svrg_bb);
  EXPECT_EQ(c.loss, LossKind::squared_hinge);
  EXPECT_EQ(c.batch_size, 128u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(c.grid, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(c.eta, 0.25);
  EXPECT_EQ(c.variant, PrecondKind::diagonal);
  EXPECT_EQ(c.l2, 0.0);
  EXPECT_TRUE(c.average_snapshot);
  apply_setting(c, "seeds", "4,9");
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 9}));
}

TEST(ConfigTest, DescribeRoundTrips) {
  RunConfig c = small_config();
  c.eta = 0.3;
  c.seeds = {7};
  c.radius = 2.5;
  RunConfig back;
  apply_config_text(back, to_config_text(c));
  EXPECT_EQ(describe(back), describe(c));
}

TEST(ConfigTest, RejectsBadInput) {
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "nope", "1"), std::invalid_argument);
  EXPECT_THROW(apply_setting(c, "batch_size", "0"), std::invalid_argument);
  EXPECT_THROW(apply_setting(c, "batch_size", "8x"), std::invalid_argument);
  EXPECT_THROW(apply_setting(c, "algo", "adam"), std::invalid_argument);
  EXPECT_THROW(apply_setting(c, "grid", ""), std::invalid_argument);
  EXPECT_THROW(apply_config_text(c, "algo svrg\n"), std::invalid_argument);
}

TEST(ConfigTest, JobsFromEnvironment) {
  RunConfig c;
  c.jobs = 3;
  EXPECT_EQ(resolve_jobs(c), 3u);
  c.jobs = 0;
  setenv("VRKIT_JOBS", "5", 1);
  EXPECT_EQ(resolve_jobs(c), 5u);
  unsetenv("VRKIT_JOBS");
  EXPECT_GE(resolve_jobs(c), 1u);
}

TEST(AggregateTest, MedianAndStd) {
  EXPECT_EQ(median({1.0, 2.0, 100.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0}), 2.5);
  EXPECT_EQ(median({1.0, std::nan(""), 5.0}), 5.0);
  const double v[] = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(stddev(v), std::sqrt(5.0 / 3.0));
}

TEST(AggregateTest, StepInterpolatesAtIntegerPasses) {
  Trace a, b;
  a.append({0.0, 4.0, 2.0, std::nullopt, 1, 0, TraceEvent::none});
  a.append({1.5, 3.0, 1.0, std::nullopt, 1, 0, TraceEvent::none});
  a.append({2.5, 2.0, 0.5, std::nullopt, 1, 0, TraceEvent::none});
  b.append({0.0, 4.0, 2.0, std::nullopt, 1, 0, TraceEvent::none});
  b.append({1.0, 1.0, 3.0, std::nullopt, 1, 0, TraceEvent::none});
  b.append({3.2, 0.5, 0.1, std::nullopt, 1, 0, TraceEvent::none});
  const Trace traces[] = {a, b};
  const Aggregate agg = aggregate(traces);
  ASSERT_EQ(agg.rows.size(), 4u);  // 0, 1, 2, 2.5
  EXPECT_EQ(agg.rows[1].grad_norm_median, 2.5);  // a: 2.0, b: 3.0
  EXPECT_EQ(agg.rows[2].grad_norm_median, 2.0);  // a: 1.0, b: 3.0
  EXPECT_EQ(agg.rows[3].pass, 2.5);
  EXPECT_EQ(agg.final_grad_norm(), 1.75);
}

TEST(AggregateTest, DivergedSeedsCountAsInfinite) {
  Trace ok, bad;
  for (double p : {0.0, 1.0, 2.0, 3.0}) ok.append({p, 1.0, 1.0 / (1 + p), std::nullopt, 1, 0, TraceEvent::none});
  bad.append({0.0, 1.0, 1.0, std::nullopt, 1, 0, TraceEvent::none});
  bad.append({1.5, std::nan(""), std::nullopt, std::nullopt, 1, 0, TraceEvent::diverged});
  const Trace traces[] = {ok, bad, ok};
  const Aggregate agg = aggregate(traces);
  EXPECT_EQ(agg.rows.back().pass, 3.0);
  EXPECT_EQ(agg.rows.back().diverged, 1u);
  EXPECT_EQ(agg.final_grad_norm(), 0.25);
  EXPECT_EQ(Aggregate::from_csv(agg.to_csv()), agg);
}

TEST(RunnerTest, SameSeedsGiveIdenticalFiles) {
  const RunConfig c = small_config();
  const Problem p = load_problem(c);
  const fs::path d1 = scratch("det1"), d2 = scratch("det2");
  write_runs(d1.string(), c, run_seeds(p, c));
  RunConfig serial = c;
  serial.jobs = 1;
  write_runs(d2.string(), serial, run_seeds(p, serial));
  for (const char* f : {"seed_0.csv", "seed_1.jsonl", "seed_2.csv", "aggregate.csv", "summary.txt"}) {
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
  }
  EXPECT_FALSE(slurp(d1 / "seed_0.csv").empty());
}

TEST(RunnerTest, AggregateRegeneratesFromPersistedTraces) {
  const RunConfig c = small_config();
  const fs::path d = scratch("regen");
  write_runs(d.string(), c, run_seeds(load_problem(c), c));
  EXPECT_EQ(aggregate_directory(d.string()).to_csv(), slurp(d / "aggregate.csv"));
}

TEST(RunnerTest, ZeroBudgetKeepsInitialRow) {
  RunConfig c = small_config();
  c.epochs = 0;
  for (Algo a : {Algo::adasvrg, Algo::adagrad, Algo::hybrid, Algo::adasvrg_at}) {
    c.algo = a;
    const SeedRuns runs = run_seeds(load_problem(c), c);
    for (const auto& r : runs.results) EXPECT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(runs.aggregate.rows.size(), 1u);
  }
}

TEST(RunnerTest, EveryAlgorithmRuns) {
  RunConfig c = small_config();
  c.seeds = {0};
  const Problem p = load_problem(c);
  for (Algo a : {Algo::sgd, Algo::adagrad, Algo::svrg, Algo::lsvrg, Algo::sarah, Algo::svrg_bb, Algo::adasvrg,
                 Algo::adasvrg_ms, Algo::adasvrg_at, Algo::hybrid}) {
    c.algo = a;
    c.eta = uses_eta(a) ? std::optional<double>(0.5) : std::nullopt;
    const RunResult r = run_one(p, c, 0);
    EXPECT_GT(r.trace.size(), 1u) << to_string(a);
    EXPECT_FALSE(r.diverged()) << to_string(a);
  }
  c.algo = Algo::svrg;
  c.eta.reset();
  EXPECT_THROW(run_one(p, c, 0), std::invalid_argument);
}

TEST(GridTest, SingletonGrid) {
  RunConfig c = small_config();
  c.algo = Algo::svrg;
  const double grid[] = {0.3};
  const GridResult g = grid_search(load_problem(c), c, grid);
  EXPECT_EQ(g.best_eta(), 0.3);
}

TEST(GridTest, AllDivergingStillPicksOne) {
  RunConfig c = small_config();
  c.algo = Algo::sgd;
  c.loss = LossKind::squared;
  c.l2 = 0.0;
  const double grid[] = {1e4, 1e5};
  const GridResult g = grid_search(load_problem(c), c, grid);
  for (const auto& e : g.entries) EXPECT_EQ(e.runs.diverged_seeds(), c.seeds.size());
  EXPECT_EQ(g.best_eta(), 1e4);
}

TEST(GridTest, QuadraticPicksBestContraction) {
  const double curvature = 0.8;
  const Problem p = quadratic(curvature);
  RunConfig c;
  c.algo = Algo::svrg;
  c.batch_size = 1;
  c.epochs = 30;
  c.seeds = {0};
  const std::vector<double> grid{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  const GridResult g = grid_search(p, c, grid);
  // Same number of steps for every eta, so the smallest |1 - eta c| wins.
  double best = grid[0];
  for (double eta : grid) {
    if (std::abs(1 - eta * curvature) < std::abs(1 - best * curvature)) best = eta;
  }
  EXPECT_EQ(g.best_eta(), best);
}

TEST(GridTest, LargerGridIsNoWorse) {
  RunConfig c = small_config();
  c.algo = Algo::svrg;
  const Problem p = load_problem(c);
  const double small[] = {0.01, 0.1};
  const double large[] = {0.01, 0.1, 1.0, 10.0};
  const GridResult a = grid_search(p, c, small);
  const GridResult b = grid_search(p, c, large);
  EXPECT_LE(b.entries[b.best].final_metric, a.entries[a.best].final_metric);
}

TEST(SwitchSearchTest, BudgetOfOne) {
  RunConfig c = small_config();
  c.epochs = 1;
  const std::size_t epochs[] = {1};
  const SwitchSearchResult r = manual_switch_search(load_problem(c), c, epochs);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_FALSE(r.candidates[0].epoch);
  EXPECT_EQ(r.candidates[1].epoch, 1u);
}

TEST(SwitchSearchTest, ReturnsArgmin) {
  RunConfig c = small_config();
  c.synthetic.mislabel_fraction = 0.2;
  c.epochs = 8;
  const std::size_t epochs[] = {1, 2, 4, 6, 8};
  const SwitchSearchResult r = manual_switch_search(load_problem(c), c, epochs);
  for (const auto& cand : r.candidates) EXPECT_LE(r.best_candidate().final_loss, cand.final_loss);
}

TEST(PlotTest, EmptyIsAnError) {
  EXPECT_THROW(render_svg({}, {}), std::invalid_argument);
  const PlotSeries empty{"x", {}, {}, {}};
  EXPECT_THROW(render_svg(std::span(&empty, 1), {}), std::invalid_argument);
}

TEST(PlotTest, OneColourPerCurve) {
  const std::vector<PlotSeries> series{{"a", {0, 1, 2}, {1, 0.1, 0.01}, {0.1, 0.01, 0.001}},
                                       {"b", {0, 1, 2}, {2, 1, 0.5}, {}}};
  const std::string svg = render_svg(series, {});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  const std::regex polyline(R"re(<polyline[^>]*stroke="(#[0-9a-f]{6})")re");
  std::set<std::string> colours;
  std::size_t lines = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), polyline); it != std::sregex_iterator(); ++it) {
    colours.insert((*it)[1]);
    ++lines;
  }
  EXPECT_EQ(lines, 2u);
  EXPECT_EQ(colours.size(), 2u);
  EXPECT_NE(svg.find(palette_color(0)), std::string::npos);
}

TEST(PlotTest, CapOnlyInSensitivityMode) {
  const std::vector<PlotSeries> series{{"a", {0, 1, 2}, {1000, 50, 0.5}, {}}};
  PlotOptions opt;
  opt.log_y = false;
  const std::string plain = render_svg(series, opt);
  opt.sensitivity = true;
  const std::string capped = render_svg(series, opt);
  // The y axis tops out at the largest plotted value.
  EXPECT_NE(plain.find(">1000<"), std::string::npos);
  EXPECT_EQ(capped.find(">1000<"), std::string::npos);
  EXPECT_NE(capped.find(">10<"), std::string::npos);
}

}  // namespace
}  // namespace vrkit::bench

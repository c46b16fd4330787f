#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vrkit/armijo.hpp"
#include "vrkit/bench/runner.hpp"
#include "vrkit/diagnostics.hpp"
#include "vrkit/libsvm.hpp"
#include "vrkit/optimizers.hpp"
#include "vrkit/phase.hpp"
#include "vrkit/synthetic.hpp"

namespace {

using namespace vrkit;
using namespace vrkit::testing;
namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string detail;
};

template <class... Args>
std::string str(const Args&... args) {
  std::ostringstream os;
  os.precision(4);
  (os << ... << args);
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem synthetic_problem(std::size_t n, std::size_t d, double mislabel, LossKind loss, double l2,
                          std::uint64_t seed = 11) {
  auto data = std::make_shared<Dataset>(
      gen_separable({.n = n, .d = d, .mislabel_fraction = mislabel, .margin = 0.1, .seed = seed}).data);
  return Problem(data, {loss}, l2);
}

// Logistic gradient from the raw rows, written independently of Problem.
Vector reference_logistic_gradient(const Problem& p, const Vector& w) {
  Vector g = p.l2_reg() * w;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vector a = p.data().dense_row(i);
    const double y = p.data().label(i);
    g -= (y / (1.0 + std::exp(y * a.dot(w))) / static_cast<double>(p.size())) * a;
  }
  return g;
}

// The problem shared by the rate checks.
Problem rate_problem() { return synthetic_problem(512, 20, 0.1, LossKind::logistic, 1.0 / 512); }

double optimum_value(const Problem& p) { return p.value(newton_minimize(p, Vector::Zero(p.dim()))); }

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + str(x);
  return s;
}

Outcome unbiasedness() {
  const Problem p(random_dataset(16, 5, 1), {LossKind::logistic}, 1.0 / 16);
  double worst = 0.0;
  std::size_t states = 0;
  RunOptions opts{.seed = 5, .batch_size = 1};
  opts.observer = [&](const StepInfo& s) {
    Vector mean = Vector::Zero(5);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::size_t one[] = {i};
      mean += p.variance_reduced_gradient(s.x, *s.anchor, *s.anchor_grad, one);
    }
    mean /= static_cast<double>(p.size());
    worst = std::max(worst, (mean - reference_logistic_gradient(p, s.x)).cwiseAbs().maxCoeff());
    ++states;
  };
  svrg(p, Vector::Zero(5), {.outer_loops = 10, .inner_loops = 10, .eta = 0.3}, opts);
  adasvrg_fixed(p, Vector::Zero(5), {.outer_loops = 10, .inner_loops = 10}, opts);
  return {states == 200 && worst <= 1e-12, str(states, " inner states, max deviation ", worst)};
}

Outcome gradient_check() {
  double worst = 0.0;
  Rng rng(2);
  for (LossKind kind : {LossKind::logistic, LossKind::squared, LossKind::huber, LossKind::squared_hinge}) {
    const Loss loss{kind};
    for (int k = 0; k < 20; ++k) {
      const Problem p(random_dataset(12, 4, 100 + k, loss.is_classification()), loss, 0.01);
      const Vector w = random_vector(4, rng);
      const Vector fd = central_difference([&](const Vector& v) { return p.value(v); }, w);
      worst = std::max(worst, relative_error(p.gradient(w), fd));
    }
  }
  return {worst < 1e-5, str("max relative error ", worst)};
}

Outcome trace_inequality() {
  const Problem p(random_dataset(40, 6, 3), {LossKind::logistic}, 0.025);
  double slack = std::numeric_limits<double>::infinity();
  for (PrecondVariant v : {PrecondVariant::scalar(), PrecondVariant::diagonal(), PrecondVariant::full_matrix()}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      double sum = 0.0;
      RunOptions opts{.seed = s, .batch_size = 2};
      opts.observer = [&](const StepInfo& info) {
        if (info.t == 1) sum = 0.0;
        sum += info.precond->inverse_norm_sq(info.direction);
        slack = std::min(slack, 2.0 * info.precond->trace_a() + 1e-6 - sum);
      };
      adasvrg_fixed(p, Vector::Zero(6), {.outer_loops = 4, .variant = v}, opts);
    }
  }
  return {slack >= 0.0, str("30 runs, min slack ", slack)};
}

Outcome single_loop_rate() {
  const Problem p = rate_problem();
  const double f_star = optimum_value(p);
  const std::vector<double> ms{200, 800, 3200, 12800};
  std::vector<double> subopt;
  for (double m : ms) {
    std::vector<double> v;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto r = adasvrg_fixed(
          p, Vector::Zero(p.dim()),
          {.outer_loops = 1, .inner_loops = static_cast<std::size_t>(m), .snapshot = SnapshotRule::average},
          {.seed = s, .batch_size = 1});
      v.push_back(p.value(r.final_iterate) - f_star);
    }
    subopt.push_back(median(v));
  }
  const double slope = loglog_slope(ms, subopt);
  return {slope >= -1.0 && slope <= -0.35, str("slope ", slope, " suboptimality ", join(subopt))};
}

Outcome fixed_inner_rate() {
  const Problem p = rate_problem();
  const double f_star = optimum_value(p);
  const std::vector<double> ks{2, 4, 8, 16};
  std::vector<double> subopt;
  for (double k : ks) {
    std::vector<double> v;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto r = adasvrg_fixed(
          p, Vector::Zero(p.dim()),
          {.outer_loops = static_cast<std::size_t>(k), .inner_loops = p.size(), .snapshot = SnapshotRule::average},
          {.seed = s, .batch_size = 1});
      v.push_back(p.value(*r.averaged_iterate) - f_star);
    }
    subopt.push_back(median(v));
  }
  const double slope = loglog_slope(ks, subopt);
  const bool monotone = non_increasing(subopt) && subopt.front() > subopt.back();
  return {monotone && slope <= -0.7, str("slope ", slope, " suboptimality ", join(subopt))};
}

Outcome multistage() {
  const Problem p = rate_problem();
  const double f_star = optimum_value(p);
  const double epsilon = 1.0 / 64;
  const std::size_t stages = static_cast<std::size_t>(std::ceil(std::log2(1.0 / epsilon)));
  const std::size_t expected_steps = 3 * ((std::size_t{1} << (stages + 2)) - 4);
  std::vector<std::vector<double>> per_stage(stages + 1);
  bool counts_ok = true;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = adasvrg_multistage(p, Vector::Zero(p.dim()), {.outer_loops_per_stage = 3, .epsilon = epsilon},
                                      {.seed = s, .batch_size = 1});
    counts_ok = counts_ok && r.inner_steps == expected_steps && r.stage_iterates.size() == stages;
    per_stage[0].push_back(p.value(Vector::Zero(p.dim())) - f_star);
    for (std::size_t i = 0; i < std::min(stages, r.stage_iterates.size()); ++i) {
      per_stage[i + 1].push_back(p.value(r.stage_iterates[i]) - f_star);
    }
  }
  std::vector<double> med;
  for (const auto& v : per_stage) med.push_back(v.empty() ? INFINITY : median(v));
  return {counts_ok && non_increasing(med),
          str(stages, " stages, ", expected_steps, " inner steps expected, counts ", counts_ok ? "match" : "differ",
              ", suboptimality ", join(med))};
}

Outcome armijo_counterexample() {
  std::size_t violations = 0, checked = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto r = svrg_inner_armijo_1d(1.0, 1.0, 1.0, 0.5, 10000, s);
    for (std::size_t t = 0; t + 1 < r.abs_iterates.size(); ++t) {
      const double x = r.abs_iterates[t];
      if (!(x > 0.0 && x < 1.0)) continue;
      ++checked;
      if (r.abs_iterates[t + 1] < x - 1e-15) ++violations;
    }
  }
  return {violations == 0 && checked > 0, str(checked, " steps checked, ", violations, " contractions")};
}

// First t (1-based) at which R >= 0.5 fires with checks at even t >= burn_in.
std::optional<std::size_t> first_fire(const std::vector<double>& g_norm_star, std::size_t burn_in) {
  PhaseTest test(0.5, burn_in);
  test.reset(0.0);
  for (std::size_t t = 0; t < g_norm_star.size(); ++t) {
    if (test.push(g_norm_star[t] * g_norm_star[t])) return t + 1;
  }
  return std::nullopt;
}

Outcome phase_transition() {
  const std::size_t n = 512;
  const Problem clean = rate_problem();
  const auto det = adagrad(clean, Vector::Zero(clean.dim()), {.iterations = 10 * n, .step = StepSizeRule::constant(1.0)},
                           {.seed = 0, .batch_size = n});
  const auto det_fire = first_fire(det.g_norm_star_history, n);

  const Problem noisy = synthetic_problem(n, 20, 0.2, LossKind::logistic, 1.0 / n);
  std::vector<double> exponents;
  std::size_t fired = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = adagrad(noisy, Vector::Zero(noisy.dim()), {.iterations = 10 * n, .step = StepSizeRule::constant(1.0)},
                           {.seed = s, .batch_size = 1});
    if (first_fire(r.g_norm_star_history, n)) ++fired;
    exponents.push_back(fit_phase_transition(r.g_norm_star_history, 0.5, n).phase2_exponent);
  }
  const double exponent = median(exponents);
  return {!det_fire && fired == 5 && std::abs(exponent - 0.5) <= 0.15,
          str("deterministic ", det_fire ? "fired" : "silent", ", stochastic fired ", fired,
              "/5, post-knee exponent ", exponent)};
}

bench::RunConfig interpolation_config(double mislabel) {
  bench::RunConfig c;
  c.synthetic = {.n = 2000, .d = 50, .mislabel_fraction = mislabel, .margin = 0.1, .seed = 7};
  c.loss = LossKind::squared_hinge;
  c.l2 = 0.0;
  c.batch_size = 64;
  c.epochs = 50;
  c.seeds = {0, 1, 2, 3, 4};
  return c;
}

double final_objective(const bench::SeedRuns& runs) { return runs.aggregate.final_objective(); }

std::size_t switched(const bench::SeedRuns& runs) {
  std::size_t k = 0;
  for (const auto& r : runs.results) k += r.switch_iteration.has_value();
  return k;
}

Outcome interpolation_ordering() {
  std::string detail;
  bool ok = true;
  std::size_t switches[2] = {0, 0};
  for (double mislabel : {0.0, 0.2}) {
    bench::RunConfig c = interpolation_config(mislabel);
    const Problem p = bench::load_problem(c);
    c.algo = bench::Algo::adagrad;
    const auto grid = bench::grid_search(p, c, c.grid);
    const auto& ada = grid.entries[grid.best].runs;
    c.algo = bench::Algo::adasvrg;
    const auto svr = bench::run_seeds(p, c);
    // Phase 1 shares AdaGrad's tuned step; phase 2 uses the heuristic.
    c.algo = bench::Algo::hybrid;
    c.eta = grid.best_eta();
    const auto hyb = bench::run_seeds(p, c);
    switches[mislabel > 0] = switched(hyb);
    if (mislabel == 0.0) {
      ok = ok && final_objective(ada) <= final_objective(svr);
      detail += str("clean: adagrad(eta=", grid.best_eta(), ") loss ", final_objective(ada), " vs adasvrg ",
                    final_objective(svr), "; ");
    } else {
      const double best = std::min(ada.aggregate.final_grad_norm(), svr.aggregate.final_grad_norm());
      ok = ok && hyb.aggregate.final_grad_norm() <= 2.0 * best;
      detail += str("noisy: hybrid grad ", hyb.aggregate.final_grad_norm(), " vs best ", best, "; ");
    }
  }
  ok = ok && switches[0] <= 2 && switches[1] >= 3;
  return {ok, detail + str("switches clean ", switches[0], "/5, noisy ", switches[1], "/5")};
}

Outcome fixture_headline() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"breast_cancer.libsvm", "digits_odd.libsvm"}) {
    bench::RunConfig c;
    c.dataset = (fs::path(VRKIT_FIXTURE_DIR) / name).string();
    c.loss = LossKind::logistic;
    c.batch_size = 64;
    c.epochs = 50;
    const Problem p = bench::load_problem(c);
    c.algo = bench::Algo::svrg;
    const auto grid = bench::grid_search(p, c, c.grid);
    c.algo = bench::Algo::adasvrg;
    const auto ada = bench::run_seeds(p, c);
    const double svrg_best = grid.entries[grid.best].final_metric;
    const double ours = ada.aggregate.final_grad_norm();
    ok = ok && ours <= 10.0 * svrg_best;
    detail += str(name, ": adasvrg ", ours, " vs svrg(eta=", grid.best_eta(), ") ", svrg_best, "; ");
  }
  return {ok, detail};
}

Outcome parser_round_trip() {
  Rng rng(12);
  std::size_t failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng.index(20), d = 1 + rng.index(30);
    auto data = std::make_shared<Dataset>(d);
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    for (std::size_t i = 0; i < n; ++i) {
      idx.clear();
      val.clear();
      for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform() < 0.4) continue;
        idx.push_back(static_cast<std::uint32_t>(j));
        val.push_back(rng.normal() * std::pow(10.0, rng.normal() * 5.0));
      }
      data->append_row(idx, val, rng.uniform() < 0.5 ? -1.0 : 1.0);
    }
    const Dataset back = parse_libsvm(serialize_libsvm(*data), {.dim = d});
    if (!(back == *data)) ++failures;
  }
  return {failures == 0, str(failures, " of 1000 datasets differ")};
}

Outcome determinism() {
  bench::RunConfig c;
  c.synthetic = {.n = 300, .d = 10, .mislabel_fraction = 0.1, .margin = 0.1, .seed = 4};
  c.epochs = 10;
  c.batch_size = 16;
  c.seeds = {0, 1};
  const fs::path root = fs::temp_directory_path() / "vrkit_acceptance_determinism";
  fs::remove_all(root);
  std::size_t files = 0, differ = 0;
  for (bench::Algo a : {bench::Algo::adasvrg, bench::Algo::adasvrg_at, bench::Algo::hybrid, bench::Algo::lsvrg}) {
    c.algo = a;
    c.eta = bench::uses_eta(a) ? std::optional<double>(0.1) : std::nullopt;
    const Problem p = bench::load_problem(c);
    const fs::path first = root / (std::string(bench::to_string(a)) + "_1");
    const fs::path second = root / (std::string(bench::to_string(a)) + "_2");
    bench::write_runs(first.string(), c, bench::run_seeds(p, c));
    bench::write_runs(second.string(), c, bench::run_seeds(p, c));
    for (const auto& entry : fs::directory_iterator(first)) {
      ++files;
      if (slurp(entry.path()) != slurp(second / entry.path().filename())) ++differ;
    }
  }
  fs::remove_all(root);
  return {files > 0 && differ == 0, str(files, " files compared, ", differ, " differ")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "unbiasedness", 1, unbiasedness},
      {2, "gradient correctness", 1, gradient_check},
      {3, "trace inequality", 5, trace_inequality},
      {4, "single outer-loop rate", 60, single_loop_rate},
      {5, "fixed inner-loop rate", 60, fixed_inner_rate},
      {6, "multi-stage halving", 60, multistage},
      {7, "armijo counter-example", 1, armijo_counterexample},
      {8, "phase transition", 120, phase_transition},
      {9, "interpolation ordering", 300, interpolation_ordering},
      {10, "fixture robustness", 600, fixture_headline},
      {11, "parser round-trip", 5, parser_round_trip},
      {12, "determinism", 10, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, str("exception: ", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.passed && secs <= c.limit_seconds;
    failed += !pass;
    std::printf("criterion %2d %-24s %s  (%.2fs / %.0fs) %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                c.limit_seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

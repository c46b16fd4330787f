#include "vrkit/bench/checks.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vrkit/armijo.hpp"
#include "vrkit/libsvm.hpp"
#include "vrkit/optimizers.hpp"
#include "vrkit/rng.hpp"

namespace vrkit::bench {

namespace {

std::shared_ptr<Dataset> random_problem_data(std::size_t n, std::size_t d, Rng& rng, bool classification) {
  auto data = std::make_shared<Dataset>(d);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < n; ++i) {
    idx.clear();
    val.clear();
    for (std::size_t j = 0; j < d; ++j) {
      if (rng.uniform() < 0.7) {
        idx.push_back(static_cast<std::uint32_t>(j));
        val.push_back(rng.normal());
      }
    }
    data->append_row(idx, val, classification ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : rng.normal());
  }
  return data;
}

Vector random_point(std::size_t d, Rng& rng) {
  Vector w(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = rng.normal();
  return w;
}

template <class... Args>
std::string str(const Args&... args) {
  std::ostringstream os;
  os.precision(3);
  (os << ... << args);
  return os.str();
}

CheckResult unbiasedness(Rng& rng) {
  Problem p(random_problem_data(16, 5, rng, true), {LossKind::logistic}, 1.0 / 16);
  double worst = 0.0;
  std::size_t states = 0;
  RunOptions opts{.seed = rng.next_u64(), .batch_size = 1};
  opts.observer = [&](const StepInfo& s) {
    Vector mean = Vector::Zero(s.x.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::size_t one[] = {i};
      mean += p.variance_reduced_gradient(s.x, *s.anchor, *s.anchor_grad, one);
    }
    mean /= static_cast<double>(p.size());
    worst = std::max(worst, (mean - p.gradient(s.x)).cwiseAbs().maxCoeff());
    ++states;
  };
  svrg(p, Vector::Zero(5), {.outer_loops = 5, .inner_loops = 10, .eta = 0.2}, opts);
  adasvrg_fixed(p, Vector::Zero(5), {.outer_loops = 5, .inner_loops = 10}, opts);
  return {"unbiasedness", worst <= 1e-12, str(states, " states, max deviation ", worst)};
}

CheckResult finite_differences(Rng& rng) {
  double worst = 0.0;
  for (LossKind kind : {LossKind::logistic, LossKind::squared, LossKind::huber, LossKind::squared_hinge}) {
    const bool cls = kind == LossKind::logistic || kind == LossKind::squared_hinge;
    for (int k = 0; k < 20; ++k) {
      Problem p(random_problem_data(10, 4, rng, cls), {kind}, 0.01);
      const Vector w = random_point(4, rng);
      Vector fd(4);
      Vector probe = w;
      for (Eigen::Index j = 0; j < 4; ++j) {
        const double h = 1e-6;
        probe[j] = w[j] + h;
        const double up = p.value(probe);
        probe[j] = w[j] - h;
        fd[j] = (up - p.value(probe)) / (2 * h);
        probe[j] = w[j];
      }
      const Vector g = p.gradient(w);
      worst = std::max(worst, (g - fd).norm() / std::max({g.norm(), fd.norm(), 1e-12}));
    }
  }
  return {"finite_differences", worst < 1e-5, str("max relative error ", worst)};
}

CheckResult trace_inequality(Rng& rng) {
  // Checked after every step of every inner loop, so it holds for each m.
  double worst = std::numeric_limits<double>::infinity();
  Problem p(random_problem_data(40, 6, rng, true), {LossKind::logistic}, 0.025);
  for (PrecondVariant v : {PrecondVariant::scalar(), PrecondVariant::diagonal(), PrecondVariant::full_matrix()}) {
    for (int s = 0; s < 10; ++s) {
      double sum = 0.0;
      RunOptions opts{.seed = rng.next_u64(), .batch_size = 2};
      opts.observer = [&](const StepInfo& info) {
        if (info.t == 1) sum = 0.0;
        sum += info.precond->inverse_norm_sq(info.direction);
        worst = std::min(worst, 2.0 * info.precond->trace_a() + 1e-6 - sum);
      };
      adasvrg_fixed(p, Vector::Zero(6), {.outer_loops = 3, .variant = v}, opts);
    }
  }
  return {"trace_inequality", worst >= 0.0, str("min slack ", worst)};
}

CheckResult parser_round_trip(Rng& rng) {
  std::size_t failures = 0;
  for (int k = 0; k < 200; ++k) {
    const auto data = random_problem_data(1 + rng.index(10), 1 + rng.index(10), rng, true);
    const Dataset back = parse_libsvm(serialize_libsvm(*data), {.dim = data->dim()});
    if (!(back == *data)) ++failures;
  }
  return {"libsvm_round_trip", failures == 0, str(failures, " of 200 datasets differ")};
}

CheckResult determinism(Rng& rng) {
  Problem p(random_problem_data(50, 5, rng, true), {LossKind::logistic}, 0.02);
  const RunOptions opts{.seed = rng.next_u64(), .batch_size = 4, .max_passes = 5};
  const auto a = adasvrg_adaptive(p, Vector::Zero(5), {}, opts);
  const auto b = adasvrg_adaptive(p, Vector::Zero(5), {}, opts);
  const bool same = a.trace.to_csv() == b.trace.to_csv() && a.trace.to_jsonl() == b.trace.to_jsonl();
  return {"determinism", same, same ? "identical traces" : "traces differ"};
}

CheckResult counters(Rng& rng) {
  Problem p(random_problem_data(30, 4, rng, true), {LossKind::logistic}, 0.03);
  const RunOptions opts{.seed = rng.next_u64(), .batch_size = 3, .max_passes = 4};
  const auto r = svrg(p, Vector::Zero(4), {.eta = 0.1}, opts);
  bool ok = true;
  double last = -1.0;
  for (const auto& row : r.trace.rows()) {
    ok = ok && row.passes > last;
    last = row.passes;
  }
  ok = ok && r.counters.passes(p.size()) >= last;
  return {"counter_monotonicity", ok, str(r.trace.size(), " trace rows")};
}

CheckResult armijo() {
  std::size_t contractions = 0;
  for (std::uint64_t s = 0; s < 10; ++s) contractions += svrg_inner_armijo_1d(1.0, 1.0, 1.0, 0.5, 10000, s).contractions;
  return {"armijo_counterexample", contractions == 0, str(contractions, " contracting steps")};
}

}  // namespace

std::vector<CheckResult> run_checks(std::uint64_t seed) {
  Rng rng(seed);
  return {unbiasedness(rng),     finite_differences(rng), trace_inequality(rng), parser_round_trip(rng),
          determinism(rng),      counters(rng),           armijo()};
}

}  // namespace vrkit::bench

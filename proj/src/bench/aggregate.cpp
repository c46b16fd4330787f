#include "vrkit/bench/aggregate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vrkit/libsvm.hpp"

namespace vrkit::bench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPassSlack = 1e-9;

struct SeedView {
  const Trace* trace;
  double end;                // last pass with a finite row, or +inf if diverged
  double diverged_at = kInf;
};

SeedView view_of(const Trace& t) {
  SeedView v{&t, t.empty() ? 0.0 : t.back().passes};
  if (!t.empty() && t.back().event == TraceEvent::diverged) {
    v.diverged_at = t.back().passes;
    v.end = kInf;
  }
  return v;
}

// Latest finite row at or before `pass`.
const TraceRow* row_at(const SeedView& v, double pass) {
  const auto& rows = v.trace->rows();
  const TraceRow* found = nullptr;
  for (const auto& r : rows) {
    if (r.passes > pass + kPassSlack) break;
    if (r.event != TraceEvent::diverged) found = &r;
  }
  return found;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

double parse_num(std::string_view s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double x = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument("aggregate: bad number '" + std::string(s) + "'");
  }
  return x;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  for (double& v : values) {
    if (std::isnan(v)) v = kInf;
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  const double a = values[n / 2 - 1], b = values[n / 2];
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) ? a : b;
  return 0.5 * (a + b);
}

double stddev(std::span<const double> values) {
  double mean = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      mean += v;
      ++k;
    }
  }
  if (k < 2) return 0.0;
  mean /= static_cast<double>(k);
  double ss = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / static_cast<double>(k - 1));
}

Aggregate aggregate(std::span<const Trace> traces) {
  Aggregate agg;
  agg.seeds = traces.size();
  if (traces.empty()) return agg;

  std::vector<SeedView> views;
  for (const Trace& t : traces) {
    if (t.empty()) throw std::invalid_argument("aggregate: empty trace");
    views.push_back(view_of(t));
  }
  double common = kInf;
  for (const auto& v : views) common = std::min(common, v.end);
  if (std::isinf(common)) {
    common = 0.0;
    for (const auto& v : views) common = std::max(common, v.diverged_at);
  }

  std::vector<double> points;
  for (double p = 0.0; p <= common + kPassSlack; p += 1.0) points.push_back(p);
  if (common - points.back() > kPassSlack) points.push_back(common);

  std::vector<double> obj(views.size()), grad(views.size());
  for (double p : points) {
    AggregateRow row;
    row.pass = p;
    for (std::size_t s = 0; s < views.size(); ++s) {
      const TraceRow* r = row_at(views[s], p);
      if (views[s].diverged_at <= p + kPassSlack || !r) {
        ++row.diverged;
        obj[s] = grad[s] = kInf;
      } else {
        obj[s] = r->objective;
        grad[s] = r->grad_norm.value_or(kInf);
      }
    }
    row.objective_median = median(obj);
    row.objective_std = stddev(obj);
    row.grad_norm_median = median(grad);
    row.grad_norm_std = stddev(grad);
    agg.rows.push_back(row);
  }
  return agg;
}

double Aggregate::final_grad_norm() const {
  return rows.empty() ? kInf : rows.back().grad_norm_median;
}

double Aggregate::final_objective() const {
  return rows.empty() ? kInf : rows.back().objective_median;
}

std::string Aggregate::to_csv() const {
  std::string out = "# seeds=" + std::to_string(seeds) + "\n";
  out += kAggregateCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += num(r.pass) + ',' + num(r.objective_median) + ',' + num(r.objective_std) + ',' +
           num(r.grad_norm_median) + ',' + num(r.grad_norm_std) + ',' + std::to_string(r.diverged) + '\n';
  }
  return out;
}

Aggregate Aggregate::from_csv(std::string_view text) {
  Aggregate agg;
  bool header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.starts_with("# seeds=")) {
      agg.seeds = static_cast<std::size_t>(parse_num(line.substr(8)));
      continue;
    }
    if (!header) {
      if (line != kAggregateCsvHeader) throw std::invalid_argument("aggregate: missing CSV header");
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    while (true) {
      const auto comma = line.find(',');
      f.push_back(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (f.size() != 6) throw std::invalid_argument("aggregate: expected 6 CSV fields");
    agg.rows.push_back({parse_num(f[0]), parse_num(f[1]), parse_num(f[2]), parse_num(f[3]), parse_num(f[4]),
                        static_cast<std::size_t>(parse_num(f[5]))});
  }
  if (!header) throw std::invalid_argument("aggregate: missing CSV header");
  return agg;
}

}  // namespace vrkit::bench

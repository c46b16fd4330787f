#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vrkit/trace.hpp"

namespace vrkit::bench {

struct AggregateRow {
  double pass = 0.0;
  double objective_median = 0.0;
  double objective_std = 0.0;
  double grad_norm_median = 0.0;
  double grad_norm_std = 0.0;
  std::size_t diverged = 0;  // seeds already diverged at this pass
  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

// Median / standard deviation across seeds at integer passes 0, 1, ... up to
// the last pass every seed reached, plus that last common pass itself. Each
// seed contributes its latest trace row at or before the pass; a diverged seed
// contributes +inf from its divergence on and never limits the common range.
struct Aggregate {
  std::size_t seeds = 0;
  std::vector<AggregateRow> rows;

  bool empty() const { return rows.empty(); }
  // Median full-gradient norm at the last common pass.
  double final_grad_norm() const;
  double final_objective() const;

  std::string to_csv() const;
  static Aggregate from_csv(std::string_view text);
  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

inline constexpr std::string_view kAggregateCsvHeader =
    "pass,objective_median,objective_std,grad_norm_median,grad_norm_std,diverged";

Aggregate aggregate(std::span<const Trace> traces);

// NaN counts as +inf. Even counts average the middle pair.
double median(std::vector<double> values);
// Sample standard deviation of the finite values (0 with fewer than two).
double stddev(std::span<const double> values);

}  // namespace vrkit::bench

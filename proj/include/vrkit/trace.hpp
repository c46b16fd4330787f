#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vrkit {

enum class TraceEvent {
  none,
  switch_phase,    // hybrid method left its AdaGrad phase
  adaptive_stop,   // an inner loop ended on the R >= theta test
  stage_boundary,  // multi-stage method finished a stage
  diverged,        // objective blew up or went non-finite; ends the trace
  step_fallback,   // BB curvature was not positive; previous step size reused
};

std::string_view to_string(TraceEvent event);
TraceEvent parse_trace_event(std::string_view name);

struct TraceRow {
  double passes = 0.0;  // per-example gradient evaluations / n
  double objective = 0.0;
  std::optional<double> grad_norm;
  std::optional<double> g_norm_star;
  double step_size = 0.0;
  std::int64_t outer = 0;
  TraceEvent event = TraceEvent::none;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

// Run history with strictly increasing `passes`. A row appended at the same
// pass count as the last row replaces it; a pending event on the old row is
// kept unless the new row carries its own.
class Trace {
 public:
  void append(TraceRow row);

  const std::vector<TraceRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }
  const TraceRow& back() const { return rows_.back(); }
  std::size_t count(TraceEvent event) const;

  // CSV with header pass,objective,grad_norm,g_norm_star,step_size,outer,event.
  // Absent values are empty fields; numbers use shortest round-trip decimals.
  std::string to_csv() const;
  static Trace from_csv(std::string_view text);

  // One JSON object per line; absent values are null and non-finite numbers
  // are the strings "inf", "-inf", "nan".
  std::string to_jsonl() const;
  static Trace from_jsonl(std::string_view text);

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<TraceRow> rows_;
};

inline constexpr std::string_view kTraceCsvHeader =
    "pass,objective,grad_norm,g_norm_star,step_size,outer,event";

}  // namespace vrkit

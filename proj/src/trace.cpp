#include "vrkit/trace.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vrkit/libsvm.hpp"

namespace vrkit {

std::string_view to_string(TraceEvent event) {
  switch (event) {
    case TraceEvent::none: return "";
    case TraceEvent::switch_phase: return "switch";
    case TraceEvent::adaptive_stop: return "adaptive_stop";
    case TraceEvent::stage_boundary: return "stage_boundary";
    case TraceEvent::diverged: return "diverged";
    case TraceEvent::step_fallback: return "step_fallback";
  }
  return "";
}

TraceEvent parse_trace_event(std::string_view name) {
  if (name.empty()) return TraceEvent::none;
  if (name == "switch") return TraceEvent::switch_phase;
  if (name == "adaptive_stop") return TraceEvent::adaptive_stop;
  if (name == "stage_boundary") return TraceEvent::stage_boundary;
  if (name == "diverged") return TraceEvent::diverged;
  if (name == "step_fallback") return TraceEvent::step_fallback;
  throw std::invalid_argument("unknown trace event '" + std::string(name) + "'");
}

void Trace::append(TraceRow row) {
  if (!rows_.empty()) {
    TraceRow& last = rows_.back();
    if (row.passes < last.passes) {
      throw std::logic_error("Trace: passes must be non-decreasing");
    }
    if (row.passes == last.passes) {
      if (row.event == TraceEvent::none) row.event = last.event;
      last = row;
      return;
    }
  }
  rows_.push_back(row);
}

std::size_t Trace::count(TraceEvent event) const {
  std::size_t c = 0;
  for (const auto& r : rows_) c += r.event == event;
  return c;
}

namespace {

double parse_double_field(std::string_view s) {
  if (s.size() > 1 && s.front() == '+') s.remove_prefix(1);
  double v;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("Trace: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> parse_optional(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double_field(s);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

nlohmann::ordered_json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::invalid_argument("Trace: bad number '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::string Trace::to_csv() const {
  std::ostringstream out;
  out << kTraceCsvHeader << '\n';
  for (const auto& r : rows_) {
    out << format_double(r.passes) << ',' << format_double(r.objective) << ','
        << (r.grad_norm ? format_double(*r.grad_norm) : "") << ','
        << (r.g_norm_star ? format_double(*r.g_norm_star) : "") << ','
        << format_double(r.step_size) << ',' << r.outer << ',' << to_string(r.event) << '\n';
  }
  return out.str();
}

Trace Trace::from_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != kTraceCsvHeader) {
    throw std::invalid_argument("Trace: missing CSV header");
  }
  Trace trace;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = split(lines[k], ',');
    if (f.size() != 7) throw std::invalid_argument("Trace: expected 7 CSV fields");
    TraceRow r;
    r.passes = parse_double_field(f[0]);
    r.objective = parse_double_field(f[1]);
    r.grad_norm = parse_optional(f[2]);
    r.g_norm_star = parse_optional(f[3]);
    r.step_size = parse_double_field(f[4]);
    std::int64_t outer;
    const auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), outer);
    if (ec != std::errc() || ptr != f[5].data() + f[5].size()) {
      throw std::invalid_argument("Trace: bad outer index");
    }
    r.outer = outer;
    r.event = parse_trace_event(f[6]);
    trace.rows_.push_back(r);
  }
  return trace;
}

std::string Trace::to_jsonl() const {
  std::string out;
  for (const auto& r : rows_) {
    nlohmann::ordered_json j;
    j["pass"] = number_to_json(r.passes);
    j["objective"] = number_to_json(r.objective);
    j["grad_norm"] = r.grad_norm ? number_to_json(*r.grad_norm) : nlohmann::ordered_json();
    j["g_norm_star"] = r.g_norm_star ? number_to_json(*r.g_norm_star) : nlohmann::ordered_json();
    j["step_size"] = number_to_json(r.step_size);
    j["outer"] = r.outer;
    j["event"] = r.event == TraceEvent::none ? nlohmann::ordered_json() : nlohmann::ordered_json(to_string(r.event));
    out += j.dump();
    out += '\n';
  }
  return out;
}

Trace Trace::from_jsonl(std::string_view text) {
  Trace trace;
  for (auto line : lines_of(text)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("Trace: bad JSON line: ") + e.what());
    }
    TraceRow r;
    r.passes = number_from_json(j.at("pass"));
    r.objective = number_from_json(j.at("objective"));
    if (!j.at("grad_norm").is_null()) r.grad_norm = number_from_json(j.at("grad_norm"));
    if (!j.at("g_norm_star").is_null()) r.g_norm_star = number_from_json(j.at("g_norm_star"));
    r.step_size = number_from_json(j.at("step_size"));
    r.outer = j.at("outer").get<std::int64_t>();
    r.event = j.at("event").is_null() ? TraceEvent::none : parse_trace_event(j.at("event").get<std::string>());
    trace.rows_.push_back(r);
  }
  return trace;
}

}  // namespace vrkit

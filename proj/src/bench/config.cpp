#include "vrkit/bench/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vrkit/libsvm.hpp"

namespace vrkit::bench {

namespace {

constexpr std::pair<Algo, std::string_view> kAlgoNames[] = {
    {Algo::sgd, "sgd"},         {Algo::adagrad, "adagrad"},       {Algo::svrg, "svrg"},
    {Algo::lsvrg, "lsvrg"},     {Algo::sarah, "sarah"},           {Algo::svrg_bb, "svrg-bb"},
    {Algo::adasvrg, "adasvrg"}, {Algo::adasvrg_ms, "adasvrg-ms"}, {Algo::adasvrg_at, "adasvrg-at"},
    {Algo::hybrid, "hybrid"},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  double x = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || end != value.data() + value.size()) bad_value(key, value);
  return x;
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  std::uint64_t x = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || end != value.data() + value.size()) bad_value(key, value);
  return x;
}

double positive(std::string_view key, std::string_view value) {
  const double x = to_double(key, value);
  if (!(x > 0.0)) bad_value(key, value);
  return x;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    const auto part = trim(text.substr(0, comma));
    if (!part.empty()) out.push_back(part);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(Algo algo) {
  for (const auto& [a, name] : kAlgoNames) {
    if (a == algo) return name;
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  for (const auto& [a, n] : kAlgoNames) {
    if (n == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool uses_eta(Algo algo) {
  switch (algo) {
    case Algo::sgd:
    case Algo::svrg:
    case Algo::lsvrg:
    case Algo::sarah: return true;
    default: return false;
  }
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  const auto parts = split_commas(text);
  if (parts.empty()) bad_value("seeds", text);
  std::vector<std::uint64_t> seeds;
  if (parts.size() == 1 && text.find(',') == std::string_view::npos) {
    const std::uint64_t count = to_uint("seeds", parts[0]);
    if (count == 0) bad_value("seeds", text);
    for (std::uint64_t s = 0; s < count; ++s) seeds.push_back(s);
    return seeds;
  }
  for (auto p : parts) seeds.push_back(to_uint("seeds", p));
  return seeds;
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  for (auto p : split_commas(text)) grid.push_back(positive("grid", p));
  if (grid.empty()) bad_value("grid", text);
  return grid;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (key == "dataset") {
    if (v.empty()) bad_value(key, v);
    c.dataset = std::string(v);
  } else if (key == "synthetic_n") {
    c.synthetic.n = to_uint(key, v);
  } else if (key == "synthetic_d") {
    c.synthetic.d = to_uint(key, v);
  } else if (key == "synthetic_mislabel") {
    c.synthetic.mislabel_fraction = to_double(key, v);
  } else if (key == "synthetic_margin") {
    c.synthetic.margin = positive(key, v);
  } else if (key == "synthetic_seed") {
    c.synthetic.seed = to_uint(key, v);
  } else if (key == "loss") {
    c.loss = parse_loss_kind(v);
  } else if (key == "huber_delta") {
    c.huber_delta = positive(key, v);
  } else if (key == "l2") {
    if (v == "1/n" || v == "auto") {
      c.l2.reset();
    } else {
      c.l2 = to_double(key, v);
      if (!(*c.l2 >= 0.0)) bad_value(key, v);
    }
  } else if (key == "algo") {
    c.algo = parse_algo(v);
  } else if (key == "variant") {
    c.variant = parse_precond_kind(v);
  } else if (key == "delta") {
    c.delta = to_double(key, v);
  } else if (key == "batch_size") {
    c.batch_size = to_uint(key, v);
    if (c.batch_size == 0) bad_value(key, v);
  } else if (key == "epochs") {
    c.epochs = to_double(key, v);
    if (!(c.epochs >= 0.0)) bad_value(key, v);
  } else if (key == "seeds") {
    c.seeds = parse_seeds(v);
  } else if (key == "eta") {
    if (v == "auto" || v == "heuristic") {
      c.eta.reset();
    } else {
      c.eta = to_double(key, v);
      if (!(*c.eta >= 0.0)) bad_value(key, v);
    }
  } else if (key == "eta0") {
    c.eta0 = positive(key, v);
  } else if (key == "theta") {
    c.theta = positive(key, v);
  } else if (key == "max_inner") {
    c.max_inner = to_uint(key, v);
  } else if (key == "burn_in") {
    c.burn_in = to_uint(key, v);
  } else if (key == "inner_loops") {
    c.inner_loops = to_uint(key, v);
  } else if (key == "epsilon") {
    c.epsilon = positive(key, v);
  } else if (key == "outer_per_stage") {
    c.outer_per_stage = to_uint(key, v);
  } else if (key == "lsvrg_p") {
    c.lsvrg_p = to_double(key, v);
  } else if (key == "snapshot") {
    if (v == "average") {
      c.average_snapshot = true;
    } else if (v == "last") {
      c.average_snapshot = false;
    } else {
      bad_value(key, v);
    }
  } else if (key == "radius") {
    if (v == "none") {
      c.radius.reset();
    } else {
      c.radius = positive(key, v);
    }
  } else if (key == "grid") {
    c.grid = parse_grid(v);
  } else if (key == "out") {
    c.out = std::string(v);
  } else if (key == "jobs") {
    c.jobs = to_uint(key, v);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(config, ss.str());
}

std::map<std::string, std::string> describe(const RunConfig& c) {
  std::map<std::string, std::string> m;
  m["dataset"] = c.dataset;
  m["synthetic_n"] = std::to_string(c.synthetic.n);
  m["synthetic_d"] = std::to_string(c.synthetic.d);
  m["synthetic_mislabel"] = format_double(c.synthetic.mislabel_fraction);
  m["synthetic_margin"] = format_double(c.synthetic.margin);
  m["synthetic_seed"] = std::to_string(c.synthetic.seed);
  m["loss"] = std::string(to_string(c.loss));
  m["huber_delta"] = format_double(c.huber_delta);
  m["l2"] = c.l2 ? format_double(*c.l2) : "1/n";
  m["algo"] = std::string(to_string(c.algo));
  m["variant"] = std::string(to_string(c.variant));
  m["delta"] = format_double(c.delta);
  m["batch_size"] = std::to_string(c.batch_size);
  m["epochs"] = format_double(c.epochs);
  std::string seeds;
  for (auto s : c.seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
  m["seeds"] = seeds + (c.seeds.size() == 1 ? "," : "");
  m["eta"] = c.eta ? format_double(*c.eta) : "auto";
  m["eta0"] = format_double(c.eta0);
  m["theta"] = format_double(c.theta);
  m["max_inner"] = std::to_string(c.max_inner);
  m["burn_in"] = std::to_string(c.burn_in);
  m["inner_loops"] = std::to_string(c.inner_loops);
  m["epsilon"] = format_double(c.epsilon);
  m["outer_per_stage"] = std::to_string(c.outer_per_stage);
  m["lsvrg_p"] = format_double(c.lsvrg_p);
  m["snapshot"] = c.average_snapshot ? "average" : "last";
  m["radius"] = c.radius ? format_double(*c.radius) : "none";
  std::string grid;
  for (double g : c.grid) grid += (grid.empty() ? "" : ",") + format_double(g);
  m["grid"] = grid;
  m["out"] = c.out;
  m["jobs"] = std::to_string(c.jobs);
  return m;
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : describe(config)) out += k + " = " + v + "\n";
  return out;
}

std::size_t resolve_jobs(const RunConfig& config) {
  if (config.jobs > 0) return config.jobs;
  if (const char* env = std::getenv("VRKIT_JOBS")) {
    std::size_t n = 0;
    const std::string_view s(env);
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && end == s.data() + s.size() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace vrkit::bench

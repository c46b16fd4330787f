#include "vrkit/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

namespace vrkit {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view strip_plus(std::string_view s) {
  if (s.size() > 1 && s.front() == '+') s.remove_prefix(1);
  return s;
}

bool parse_number(std::string_view token, double& out) {
  token = strip_plus(token);
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool parse_index(std::string_view token, std::uint64_t& out) {
  if (token.empty()) return false;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

LabelMapping infer_mapping(const std::vector<double>& labels) {
  const std::set<double> distinct(labels.begin(), labels.end());
  auto subset_of = [&](double lo, double hi) {
    return std::all_of(distinct.begin(), distinct.end(), [&](double v) { return v == lo || v == hi; });
  };
  if (subset_of(-1.0, 1.0)) return LabelMapping::plus_minus;
  if (distinct.size() == 2 && subset_of(0.0, 1.0)) return LabelMapping::zero_one;
  if (distinct.size() == 2 && subset_of(1.0, 2.0)) return LabelMapping::one_two;
  return LabelMapping::none;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  Dataset data;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < rest.size()) {
      while (pos < rest.size() && is_space(rest[pos])) ++pos;
      std::size_t end = pos;
      while (end < rest.size() && !is_space(rest[end])) ++end;
      if (end > pos) tokens.push_back(rest.substr(pos, end - pos));
      pos = end;
    }
    if (tokens.empty()) continue;

    double label;
    if (!parse_number(tokens[0], label)) {
      throw ParseError(line_no, "malformed label '" + std::string(tokens[0]) + "'");
    }
    indices.clear();
    values.clear();
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const std::string_view tok = tokens[k];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "malformed token '" + std::string(tok) + "', expected idx:val");
      }
      std::uint64_t idx;
      if (!parse_index(tok.substr(0, colon), idx) || idx == 0 || idx > UINT32_MAX) {
        throw ParseError(line_no, "malformed feature index in '" + std::string(tok) + "'");
      }
      double val;
      if (!parse_number(tok.substr(colon + 1), val)) {
        throw ParseError(line_no, "non-numeric value in '" + std::string(tok) + "'");
      }
      const auto zero_based = static_cast<std::uint32_t>(idx - 1);
      if (!indices.empty() && zero_based <= indices.back()) {
        throw ParseError(line_no, "feature indices must be strictly increasing");
      }
      indices.push_back(zero_based);
      values.push_back(val);
    }
    data.append_row(indices, values, label, /*grow_dim=*/true);
  }
  if (data.empty()) throw ParseError(line_no, "empty dataset");

  if (options.dim) {
    if (*options.dim < data.dim()) {
      throw ParseError(line_no, "dimension override smaller than the largest feature index");
    }
    data.set_dim(*options.dim);
  }

  std::vector<double> labels = data.labels();
  LabelMapping mapping = options.map_labels ? infer_mapping(labels) : LabelMapping::none;
  if (mapping == LabelMapping::zero_one || mapping == LabelMapping::one_two) {
    const double low = mapping == LabelMapping::zero_one ? 0.0 : 1.0;
    for (double& y : labels) y = (y == low) ? -1.0 : 1.0;
  }
  data.set_labels(std::move(labels), mapping);
  return data;
}

Dataset parse_libsvm(std::string_view text, const LibsvmOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, options);
}

Dataset load_libsvm(const std::string& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return parse_libsvm(in, options);
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = data.label(i);
    if (y == 1.0) {
      out << "+1";
    } else {
      out << format_double(y);
    }
    const auto row = data.row(i);
    for (std::size_t j = 0; j < row.indices.size(); ++j) {
      out << ' ' << (row.indices[j] + 1) << ':' << format_double(row.values[j]);
    }
    out << '\n';
  }
}

std::string serialize_libsvm(const Dataset& data) {
  std::ostringstream out;
  write_libsvm(out, data);
  return out.str();
}

void save_libsvm(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset '" + path + "'");
  write_libsvm(out, data);
}

}  // namespace vrkit

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vrkit/dataset.hpp"

namespace vrkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LibsvmOptions {
  // Pads the dimension beyond the largest index seen in the file.
  std::optional<std::size_t> dim;
  // Map two-valued label sets {0,1} / {1,2} onto {-1,+1}.
  bool map_labels = true;
};

// Reads `<label> <idx>:<val> ...` lines with 1-based indices. Blank lines and
// '#' comments are skipped; "\n" and "\r\n" line endings are accepted.
Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
Dataset parse_libsvm(std::string_view text, const LibsvmOptions& options = {});
Dataset load_libsvm(const std::string& path, const LibsvmOptions& options = {});

// One line per row, shortest round-trip decimal for every number. Labels +1
// and -1 are written as "+1" and "-1".
std::string serialize_libsvm(const Dataset& data);
void write_libsvm(std::ostream& out, const Dataset& data);
void save_libsvm(const std::string& path, const Dataset& data);

// Shortest decimal that parses back to exactly x.
std::string format_double(double x);

}  // namespace vrkit

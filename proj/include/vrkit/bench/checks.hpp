#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vrkit::bench {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runtime invariant suites on small random problems: unbiasedness of the
// variance-reduced direction, gradient vs finite differences, the AdaGrad
// trace inequality, LIBSVM round-trip, run determinism, counter monotonicity
// and the line-search counter-example.
std::vector<CheckResult> run_checks(std::uint64_t seed);

}  // namespace vrkit::bench

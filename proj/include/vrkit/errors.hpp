#pragma once

#include <stdexcept>
#include <string>

namespace vrkit {

// A computation produced NaN/inf or hit an undefined operation (e.g. a scalar
// AdaGrad step before any nonzero gradient was accumulated).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vrkit

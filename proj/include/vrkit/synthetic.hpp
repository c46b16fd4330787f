#pragma once

#include <cstdint>

#include "vrkit/dataset.hpp"

namespace vrkit {

struct SyntheticSpec {
  std::size_t n = 10000;
  std::size_t d = 200;
  double mislabel_fraction = 0.0;
  double margin = 0.1;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset data;
  Vector w_star;  // unit norm
  std::vector<std::size_t> flipped;  // sorted positions of flipped labels
};

// Standard-normal features labelled by sign(<w*, a>) with |<w*, a>| >= margin
// enforced by resampling, followed by floor(mislabel_fraction * n) label flips
// at distinct uniformly chosen rows.
SyntheticData gen_separable(const SyntheticSpec& spec);

}  // namespace vrkit

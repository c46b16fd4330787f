#include "vrkit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vrkit/rng.hpp"

namespace vrkit {

SyntheticData gen_separable(const SyntheticSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("gen_separable: n must be >= 2");
  if (spec.d < 1) throw std::invalid_argument("gen_separable: d must be >= 1");
  if (!(spec.mislabel_fraction >= 0.0 && spec.mislabel_fraction <= 1.0)) {
    throw std::invalid_argument("gen_separable: mislabel_fraction must be in [0, 1]");
  }
  if (!(spec.margin > 0.0)) throw std::invalid_argument("gen_separable: margin must be > 0");

  const auto d = static_cast<Eigen::Index>(spec.d);
  Rng rng = Rng::stream(spec.seed, 0);

  Vector w_star(d);
  do {
    for (Eigen::Index j = 0; j < d; ++j) w_star[j] = rng.normal();
  } while (w_star.norm() == 0.0);
  w_star.normalize();

  SyntheticData out{Dataset(spec.d), w_star, {}};
  std::vector<std::uint32_t> indices(spec.d);
  std::iota(indices.begin(), indices.end(), 0u);
  Vector a(d);
  std::vector<double> labels;
  labels.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double score;
    do {
      for (Eigen::Index j = 0; j < d; ++j) a[j] = rng.normal();
      score = a.dot(w_star);
    } while (std::abs(score) < spec.margin);
    out.data.append_row(indices, std::span<const double>(a.data(), spec.d), score > 0 ? 1.0 : -1.0);
    labels.push_back(score > 0 ? 1.0 : -1.0);
  }

  const auto flips = static_cast<std::size_t>(std::floor(spec.mislabel_fraction * static_cast<double>(spec.n)));
  if (flips > 0) {
    Rng flip_rng = Rng::stream(spec.seed, 1);
    BatchSampler sampler(spec.n);
    sampler.sample(flip_rng, flips, out.flipped);
    std::sort(out.flipped.begin(), out.flipped.end());
    for (std::size_t i : out.flipped) labels[i] = -labels[i];
  }
  out.data.set_labels(std::move(labels), LabelMapping::plus_minus);
  return out;
}

}  // namespace vrkit

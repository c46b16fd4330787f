#include "vrkit/rng.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vrkit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(splitmix64(splitmix64(seed) ^ (stream_id * 0xd1342543de82ef95ULL)));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  const std::uint64_t range = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

BatchSampler::BatchSampler(std::size_t n) : n_(n), taken_(n, 0) {}

void BatchSampler::sample(Rng& rng, std::size_t k, std::vector<std::size_t>& out) {
  if (k == 0 || k > n_) throw std::invalid_argument("BatchSampler: batch size must be in [1, n]");
  out.clear();
  if (k == n_) {
    out.resize(n_);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return;
  }
  for (std::size_t j = n_ - k; j < n_; ++j) {
    const std::size_t r = rng.index(j + 1);
    const std::size_t pick = taken_[r] ? j : r;
    taken_[pick] = 1;
    out.push_back(pick);
  }
  for (std::size_t i : out) taken_[i] = 0;
}

}  // namespace vrkit

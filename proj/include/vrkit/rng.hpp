#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace vrkit {

// Seeded mt19937_64 stream. Uniform, index and normal draws are derived here
// rather than through <random> distributions, whose output is
// implementation-defined, so a seed produces the same stream on every
// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, stream_id), mixed with splitmix64.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform on {0, ..., n - 1}; n > 0.
  std::size_t index(std::size_t n);

  // Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// Draws k distinct indices from {0, ..., n - 1} (Floyd's algorithm). Keeps an
// n-sized scratch mask so repeated mini-batch draws allocate nothing.
class BatchSampler {
 public:
  explicit BatchSampler(std::size_t n);

  void sample(Rng& rng, std::size_t k, std::vector<std::size_t>& out);

  std::size_t population() const { return n_; }

 private:
  std::size_t n_;
  std::vector<unsigned char> taken_;
};

}  // namespace vrkit

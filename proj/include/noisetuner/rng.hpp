#ifndef NOISETUNER_RNG_HPP_
#define NOISETUNER_RNG_HPP_

#include <cstdint>

namespace noisetuner {

// Mixes two 64-bit values into a new stream key. Used to derive independent
// substreams (per purpose, per iteration) from a single experiment seed.
std::uint64_t mix_seed(std::uint64_t key, std::uint64_t stream);

// Counter-based deterministic pseudorandom stream (splitmix64). The n-th
// output is a pure function of (key, n), so runs are reproducible bit for
// bit and streams never depend on platform library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64();

  // Uniform draw in (0, 1].
  double next_unit();

  // Standard normal via Box-Muller; consumes two uniforms per pair and
  // caches the second value.
  double next_normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace noisetuner

#endif  // NOISETUNER_RNG_HPP_

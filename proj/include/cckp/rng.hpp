#ifndef CCKP_RNG_HPP
#define CCKP_RNG_HPP

#include <cstdint>

namespace cckp {

/// Deterministic 64-bit generator used by every randomized component.
///
/// Core: xoshiro256++ (Blackman/Vigna), state seeded with four successive
/// outputs of a SplitMix64 stream started at the given seed. Trial streams
/// are derived with `child(master, stream)`, which applies the SplitMix64
/// finalizer to `master + (stream + 1) * 0x9E3779B97F4A7C15`. The identity
/// of the generator and the derivation rule are part of the reproducibility
/// contract: the same (seed, draw sequence) yields the same values on every
/// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for trial `stream` under `master` seed.
  static Rng child(std::uint64_t master, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Unbiased integer in [0, bound). bound must be >= 1.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform double in [0, 1), 53 random mantissa bits.
  double uniform_double();

  bool bernoulli(double p) { return uniform_double() < p; }

 private:
  std::uint64_t state_[4];
};

/// SplitMix64 finalizer (mixing function only; advances no state).
std::uint64_t splitmix64_mix(std::uint64_t x);

/// Seed value Rng::child(master, stream) starts from.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace cckp

#endif  // CCKP_RNG_HPP

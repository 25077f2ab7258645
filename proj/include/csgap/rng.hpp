#pragma once

#include <cstdint>
#include <limits>

namespace csgap {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for a named sub-stream. Distinct tags give unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag + 0x9e3779b97f4a7c15ULL));
}

/// Counter-based SplitMix64 stream: output k is mix64(seed + (k + 1) * gamma).
///
/// Every randomized routine in the library takes a 64-bit seed and builds
/// its own Rng from it, so results depend only on (seed, parameters).
/// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  result_type operator()() { return mix64(seed_ + (++counter_) * kGamma); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  Rng split(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// +1 or -1 with equal probability.
  int sign() { return ((*this)() >> 63) ? -1 : 1; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace csgap

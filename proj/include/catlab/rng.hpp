#ifndef CATLAB_RNG_HPP
#define CATLAB_RNG_HPP

#include <cstdint>

namespace catlab {

struct RngSeed {
  std::uint64_t value = 0;
};

namespace detail {

// SplitMix64 finalizer, used as the output hash of the counter generator.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

// Counter-based generator: output i of stream `key` is mix64(key + i*phi).
// Identical seed and call sequence give identical draws on every platform,
// and split() derives statistically independent child streams.
class Rng {
 public:
  Rng() = default;
  explicit Rng(RngSeed seed) : key_(seed.value) {}

  std::uint64_t next_u64() {
    return detail::mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
  }

  /// Child stream; disjoint from the parent for distinct tags.
  Rng split(std::uint64_t tag) const {
    return Rng(RngSeed{detail::mix64(key_ ^ 0xd1b54a32d192ed03ULL ^ tag * 0x8cb92ba72f3d8dd7ULL)});
  }

  RngSeed seed() const { return RngSeed{key_}; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace catlab

#endif

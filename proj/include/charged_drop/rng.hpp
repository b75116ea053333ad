#pragma once

#include <cstdint>

namespace charged_drop {

/// Counter-based generator: the n-th draw for a key is the SplitMix64
/// finalizer applied to key + (n + 1) * golden_gamma.  Draws depend only on
/// (key, counter), so streams are reproducible on every platform and
/// independent streams are obtained by changing the key.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Key of an independent child stream, e.g. one per restart.
  static std::uint64_t derive_key(std::uint64_t key, std::uint64_t index) {
    return mix(key ^ mix(index + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace charged_drop

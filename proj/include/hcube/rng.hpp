#pragma once

#include <cstdint>
#include <string_view>

namespace hcube {

/// Identifier of the generator algorithm; recorded in every output manifest.
inline constexpr std::string_view kAlgorithmId = "splitmix64/modrej-v1";

/// SplitMix64 finalizer (Steele, Lea, Flood; constants from Vigna's reference code).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Per-trial seed: mix64(master ^ (trial * 0x9E3779B97F4A7C15)).
///
/// Multiplication by an odd constant and mix64 are both bijections on
/// 64-bit words, so the map is injective in trial for a fixed master.
constexpr std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return mix64(master ^ (trial * 0x9E3779B97F4A7C15ull));
}

/// Deterministic 64-bit stream (SplitMix64).
///
/// Draw accounting, fixed by kAlgorithmId:
///  - next_coordinate(n) consumes one word per attempt; a word x is rejected
///    while x < (2^64 mod n), otherwise the result is x mod n.
///  - next_sign() consumes exactly one word; +1 iff the top bit is 0, i.e.
///    iff the 53-bit uniform (x >> 11) * 2^-53 is below 1/2.
///  - next_uniform() consumes exactly one word: (x >> 11) * 2^-53.
/// The same seed gives the same sequence on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  unsigned next_coordinate(unsigned n) noexcept {
    const std::uint64_t range = n;
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return static_cast<unsigned>(x % range);
    }
  }

  int next_sign() noexcept { return (next_u64() >> 63) == 0 ? +1 : -1; }

  double next_uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return next_uniform() < p; }

  std::uint64_t state() const noexcept { return state_; }
  static constexpr std::string_view algorithm_id() noexcept { return kAlgorithmId; }

 private:
  std::uint64_t state_;
};

}  // namespace hcube

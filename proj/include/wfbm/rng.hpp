#pragma once

#include <cmath>
#include <cstdint>

namespace wfbm {

// Counter-based generator built on the splitmix64 finalizer: every draw is a
// pure function of (key, counter), so per-path streams are independent and the
// sampling order never affects the numbers.
class CounterRng {
 public:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Stream key for path (or job) `stream` under a global seed.
  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  }

  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(stream_key(seed, stream)) {}

  // Uniform in (0, 1), 53-bit resolution, never exactly 0 or 1.
  double uniform(std::uint64_t counter) const {
    const std::uint64_t x = mix(key_ + counter * 0xD1342543DE82EF95ULL);
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller on counters (2k, 2k+1).
  double normal(std::uint64_t k) const {
    const double u1 = uniform(2 * k);
    const double u2 = uniform(2 * k + 1);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace wfbm

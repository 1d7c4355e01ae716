#pragma once

#include <cstdint>

namespace urnlab {

/// Counter-based splitmix64 stream. Streams are keyed by (seed, stream), so
/// replications can run on any thread in any order and still reproduce
/// bit-identical draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed ^ 0x9E3779B97F4A7C15ull) ^
               mix(stream * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull)) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform double in [0, 1).
  double next_unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace urnlab

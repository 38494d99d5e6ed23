#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace edgeplace {

// SplitMix64. The update and output rules are fixed so that a seed fully
// determines every draw on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Finalizer of SplitMix64, usable as a stateless 64-bit mixer.
std::uint64_t mix64(std::uint64_t z);

/// Independent generator for a (seed, stream) pair.
SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t stream);

/// Two-level variant used for per-slot streams: (seed, tag, index).
SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t index);

}  // namespace edgeplace

#include "edgeplace/random.hpp"

#include <stdexcept>

namespace edgeplace {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::size_t SplitMix64::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(mix64(seed ^ mix64(stream + kGolden)));
}

SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t index) {
  return SplitMix64(mix64(seed ^ mix64(tag + kGolden) ^
                          mix64(mix64(index) + 2 * kGolden)));
}

}  // namespace edgeplace

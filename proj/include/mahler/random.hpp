#pragma once

#include <cstdint>

namespace mahler {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stateless generator: every draw is a pure function of (seed, stream, index,
/// lane), so Monte Carlo results do not depend on how samples are split
/// across threads.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix64(seed ^ mix64(stream + 1))) {}

  std::uint64_t bits(std::uint64_t index, std::uint64_t lane) const {
    return mix64(key_ ^ mix64(index * 0x632be59bd9b4e019ULL + lane));
  }
  /// Uniform in [0, 1).
  double uniform(std::uint64_t index, std::uint64_t lane) const {
    return static_cast<double>(bits(index, lane) >> 11) * 0x1.0p-53;
  }
  /// Uniform in [-1, 1).
  double symmetric(std::uint64_t index, std::uint64_t lane) const { return 2.0 * uniform(index, lane) - 1.0; }
  /// Standard normal (Box-Muller on lanes 2k and 2k+1).
  double normal(std::uint64_t index, std::uint64_t lane) const;

 private:
  std::uint64_t key_;
};

}  // namespace mahler

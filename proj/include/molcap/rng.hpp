#pragma once

#include <cstdint>
#include <random>

namespace molcap {

/// SplitMix64 finalizer; used to derive independent stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Reproducible generator for one (seed, stream) pair. Streams with different
/// indices are statistically independent and need no coordination.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits; identical across standard libraries.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard exponential draw, for flat Dirichlet weights.
  double exponential();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace molcap

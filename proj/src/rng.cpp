#include "molcap/rng.hpp"

#include <cmath>

namespace molcap {

double RandomStream::exponential() {
  // 1 − U lies in (0, 1], so the logarithm is finite.
  return -std::log1p(-uniform());
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  // Rejection keeps r % n exactly uniform: discard the short leading range of size 2^64 mod n.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

}  // namespace molcap

#pragma once

#include <cstdint>

namespace simparr {

// SplitMix64: tiny, seedable, and byte-reproducible across platforms, which
// std::mt19937 + std::uniform_int_distribution are not (distribution output
// is implementation-defined). Used everywhere randomness is needed so that
// seeds pin down test corpora exactly.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : x_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (x_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) via the multiply-shift reduction (deterministic,
  // bias < 2^-64 which is irrelevant for test-corpus sampling).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform integer in [lo, hi] inclusive.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() & 1u) != 0; }

 private:
  std::uint64_t x_;
};

}  // namespace simparr

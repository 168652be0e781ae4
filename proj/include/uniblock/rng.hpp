#pragma once

#include <cstdint>
#include <random>

#include "uniblock/errors.hpp"

namespace uniblock {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded generator with fixed sampling algorithms, so that identical seeds
// give identical streams on every platform (std::mt19937_64 output is
// standardised; the std distributions are not, hence the hand-rolled
// sampling below).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Independent stream for (seed, index) pairs; used to parallelise corpora
  // and trials without sharing generator state.
  static Rng derived(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). Rejection sampling with a power-of-two mask.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw PreconditionError("Rng::below: bound must be positive");
    if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
    std::uint64_t mask = ~0ULL >> __builtin_clzll(bound);
    std::uint64_t x;
    do {
      x = next_u64() & mask;
    } while (x >= bound);
    return x;
  }

  int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return unit() < p;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace uniblock

#pragma once

#include <cmath>
#include <cstdint>

namespace framesync {

// Small deterministic generator (splitmix64 core). std::*_distribution output
// is implementation-defined, so everything that must reproduce byte-identical
// results draws through this instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint8_t next_bit() { return static_cast<uint8_t>(next_u64() >> 63); }

  // Uniform in [0, 1), 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  uint64_t below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  // Standard normal via Box-Muller (no cached second sample, so the draw
  // count per call is fixed).
  double gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Derive an independent stream seed; used to hand each trial its own rng.
  static uint64_t derive(uint64_t seed, uint64_t stream) {
    Rng r(seed ^ (0x6a09e667f3bcc909ull * (stream + 1)));
    return r.next_u64();
  }

 private:
  uint64_t state_;
};

}  // namespace framesync

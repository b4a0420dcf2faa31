#pragma once

#include <cstdint>

namespace tl {

// Counter-based splittable stream: every draw is a pure function of
// (seed, stream, counter), so parallel consumers stay reproducible
// regardless of scheduling.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

  double uniform01() { return to_unit(next()); }

  // Uniform in [0, n).
  uint64_t uniform_index(uint64_t n) { return next() % n; }

  uint64_t next() { return mix(seed_, stream_, counter_++); }

  static double to_unit(uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  // splitmix64-style finalizer over the key triple
  static uint64_t mix(uint64_t a, uint64_t b, uint64_t c) {
    uint64_t z = a * 0x9e3779b97f4a7c15ULL + b * 0xbf58476d1ce4e5b9ULL + c + 0x94d049bb133111ebULL;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t seed_;
  uint64_t stream_;
  uint64_t counter_ = 0;
};

}  // namespace tl

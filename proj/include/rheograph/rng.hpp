#pragma once

#include <cmath>
#include <cstdint>

namespace rheo {

// Counter-based deterministic RNG.  Each draw hashes (seed, counter) with the
// SplitMix64 finalizer, so streams are reproducible across platforms and
// independent of call order within a stream: the n-th uniform from a given
// seed is always the same number.  This is what makes report files
// byte-identical across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Log-uniform in [lo, hi), lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  // Standard normal via Box-Muller (one value per call; the pair's second
  // member is discarded to keep the stream position independent of caching).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    // keep u1 away from 0 so log() is finite
    u1 = u1 < 0x1.0p-53 ? 0x1.0p-53 : u1;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace rheo

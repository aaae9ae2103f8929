#ifndef FIRMLAB_RNG_HPP
#define FIRMLAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace firmlab {

// SplitMix64 (Steele, Lea & Flood 2014; Vigna's fixed-increment variant).
// The algorithm, not a library, is pinned so fixtures stay portable.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller on two consecutive uniforms
  // (cosine branch only, so one draw consumes exactly two uniforms).
  double next_normal() {
    double u1 = next_uniform();
    const double u2 = next_uniform();
    if (u1 == 0.0) u1 = 0x1.0p-53;  // avoid log(0)
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  uint64_t state_;
};

}  // namespace firmlab

#endif

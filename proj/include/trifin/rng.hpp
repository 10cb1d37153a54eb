#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "trifin/types.hpp"

namespace trifin {

/// Deterministic uniform sampler. All draws go through the fixed 53-bit
/// mapping in unit() so streams are bit-reproducible across platforms and
/// standard libraries (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform over the disc of the given radius in the z = 0 plane.
  /// Draw order: radius variate first, then angle.
  Vec3 on_disc(double radius) {
    const double r = radius * std::sqrt(unit());
    const double theta = 2.0 * std::numbers::pi * unit();
    return {r * std::cos(theta), r * std::sin(theta), 0.0};
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trifin

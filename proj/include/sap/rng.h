/// @file rng.h
/// @brief Seeded random generator with portable uniform and normal draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// standard distributions are not. Variates are derived here directly from
/// the raw engine so identical seeds give identical streams on every
/// platform and standard library.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sap {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Normal draw via Box-Muller; pairs are cached.
  double normal(double mean, double stddev) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard the log: uniform() can return exactly 0.
    while (u1 <= 0.0) u1 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return mean + stddev * radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sap

// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUENCHLAB_RNG_HPP
#define QUENCHLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

#include "quenchlab/errors.hpp"

namespace quenchlab {

/// Derives an independent stream seed from a master seed and a key path,
/// e.g. (purpose, realization, h-index). Uses splitmix64 as the mixing
/// function, so streams for distinct paths are decorrelated and adding a new
/// purpose never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(master);
  for (std::uint64_t k : path) s = mix(s ^ mix(k + 0x632be59bd9b4e019ULL));
  return s;
}

/// Seedable stream with portable draw semantics: the engine (mt19937_64) is
/// fully specified by the standard and all variates below are built from raw
/// 64-bit words, so identical seeds give bit-identical sequences everywhere.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection-free modulo bias is negligible for the n used here, but the
    // widening-multiply trick avoids it exactly for n < 2^32 and keeps the
    // draw count at one word either way.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  /// Standard normal via Box-Muller; the antithetic partner is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Gamma(shape, 1) via Marsaglia-Tsang, valid for any shape > 0.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw ParameterError("gamma shape must be > 0");
    if (shape < 1.0) {
      // Boost to shape+1 and scale back.
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Key-path purpose tags used to derive per-task streams (see derive_seed).
namespace stream_purpose {
inline constexpr std::uint64_t kDisorder = 1;
inline constexpr std::uint64_t kShots = 2;
inline constexpr std::uint64_t kTrajectory = 3;
inline constexpr std::uint64_t kChain = 4;
inline constexpr std::uint64_t kCalibration = 5;
}  // namespace stream_purpose

}  // namespace quenchlab

#endif

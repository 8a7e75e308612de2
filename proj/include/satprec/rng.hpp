// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "satprec/common.hpp"

namespace satprec {

/// One splitmix64 step. Used for seed derivation only, never as the
/// simulation generator itself.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and up to three stream keys.
/// The splitting rule is fixed so that sweeps are reproducible independently
/// of execution order: every (tag, key, run) triple owns its own stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  splitmix64(s);
  s ^= a;
  splitmix64(s);
  s ^= b;
  splitmix64(s);
  s ^= c;
  return splitmix64(s);
}

/// Deterministic random stream.
///
/// std::mt19937_64 has a standard-specified output sequence; the
/// distribution transforms below are written out explicitly (instead of
/// using std::uniform_real_distribution etc., whose mapping is
/// implementation-defined) so that identical seeds give bit-identical
/// draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  /// Uniform phase on (0, 2*pi].
  double phase() { return 2.0 * M_PI * uniform_open0(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 = uniform_open0();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Circularly-symmetric complex Gaussian, unit variance (0.5 per part).
  cxd cnormal() {
    const double re = normal();
    const double im = normal();
    return cxd(re * M_SQRT1_2, im * M_SQRT1_2);
  }

 private:
  std::mt19937_64 gen_;
};

namespace seed_tag {
// Stream tags for derive_seed. Values are arbitrary but frozen: changing
// them changes every simulation output.
constexpr std::uint64_t kUserDrop = 0x5DA1;
constexpr std::uint64_t kPhases = 0x5DA2;
constexpr std::uint64_t kChannel = 0x5DA3;
constexpr std::uint64_t kSolver = 0x5DA4;
constexpr std::uint64_t kRandomize = 0x5DA5;
}  // namespace seed_tag

}  // namespace satprec

// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "satprec/common.hpp"

namespace satprec {

enum class Taper { kGaussian, kBesselTaper };

/// Parametric multibeam antenna pattern over a planar (flat-earth) coverage
/// area. The satellite sits at `satellite_height_m` above the origin; beam
/// centers and user positions are ground coordinates in meters.
///
/// Gaussian taper: G(theta) = G0 * 10^(-0.3*(theta/theta3dB)^2), floored at
/// `sidelobe_floor_db` below boresight, so the gain is exactly -3 dB at the
/// 3 dB beamwidth and non-increasing in the angular offset down to the floor.
/// The Bessel taper uses the uniform circular-aperture mainlobe
/// (2*J1(u)/u)^2 and clamps everything beyond the first null to the floor,
/// keeping the same monotonicity contract.
struct BeamPattern {
  std::vector<Vec2> centers_m;
  double boresight_gain_dbi = 52.0;
  double beamwidth_3db_deg = 0.4;
  double sidelobe_floor_db = -30.0;  // relative to boresight
  Taper taper = Taper::kGaussian;
  double footprint_radius_m = 0.0;
  double satellite_height_m = 35786e3;

  int n_beams() const { return static_cast<int>(centers_m.size()); }

  void validate() const {
    if (centers_m.empty()) throw config_error("beam pattern: no beam centers");
    if (beamwidth_3db_deg <= 0.0)
      throw config_error("beam pattern: beamwidth_3dB must be > 0");
    if (sidelobe_floor_db >= 0.0)
      throw config_error("beam pattern: sidelobe floor must be < 0 dB");
    if (footprint_radius_m <= 0.0)
      throw config_error("beam pattern: footprint radius must be > 0");
    if (satellite_height_m <= 0.0)
      throw config_error("beam pattern: satellite height must be > 0");
  }

  /// Angle at the satellite between the directions to `pos` and to beam
  /// center `j`. atan2 of cross/dot is stable for the sub-degree offsets a
  /// GEO geometry produces.
  double offset_angle_rad(const Vec2& pos, int j) const {
    const double h = satellite_height_m;
    const Eigen::Vector3d u(pos.x(), pos.y(), -h);
    const Eigen::Vector3d b(centers_m[j].x(), centers_m[j].y(), -h);
    return std::atan2(u.cross(b).norm(), u.dot(b));
  }

  /// Gain in dBi of beam j toward a ground position.
  double gain_dbi(const Vec2& pos, int j) const {
    const double theta = offset_angle_rad(pos, j);
    const double theta3 = beamwidth_3db_deg * M_PI / 180.0;
    const double x = theta / theta3;
    double rel_db;
    switch (taper) {
      case Taper::kGaussian:
        rel_db = -3.0 * x * x;
        break;
      case Taper::kBesselTaper: {
        // -3 dB of (2*J1(u)/u)^2 sits at u = 1.61634; first null at 3.83171.
        const double u = 1.6163399483107032 * x;
        if (u >= 3.8317059702075125) {
          rel_db = sidelobe_floor_db;
        } else if (u < 1e-8) {
          rel_db = 0.0;
        } else {
          const double a = 2.0 * std::cyl_bessel_j(1, u) / u;
          rel_db = 10.0 * std::log10(a * a);
        }
        break;
      }
      default:
        throw config_error("beam pattern: unknown taper");
    }
    return boresight_gain_dbi + std::max(rel_db, sidelobe_floor_db);
  }

  double gain_linear(const Vec2& pos, int j) const {
    return db_to_lin(gain_dbi(pos, j));
  }

  /// Beam with the highest gain toward `pos`; ties broken by lowest index.
  int strongest_beam(const Vec2& pos) const {
    int best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_beams(); ++j) {
      const double g = gain_dbi(pos, j);
      if (g > best_gain) {
        best_gain = g;
        best = j;
      }
    }
    return best;
  }

  double slant_range_m(const Vec2& pos) const {
    return std::hypot(satellite_height_m, pos.norm());
  }

  /// Smallest nonzero center-to-center distance.
  double min_spacing_m() const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_beams(); ++i)
      for (int j = i + 1; j < n_beams(); ++j)
        d = std::min(d, (centers_m[i] - centers_m[j]).norm());
    return d;
  }

  /// Pairs of beams whose centers are within `factor` of the lattice spacing.
  std::vector<std::pair<int, int>> adjacency(double factor = 1.05) const {
    const double cutoff = factor * min_spacing_m();
    std::vector<std::pair<int, int>> adj;
    for (int i = 0; i < n_beams(); ++i)
      for (int j = i + 1; j < n_beams(); ++j)
        if ((centers_m[i] - centers_m[j]).norm() <= cutoff) adj.emplace_back(i, j);
    return adj;
  }

  /// Compact 9-beam cluster on a hexagonal lattice: three rows of three,
  /// adjacent rows offset by half the spacing. Beam j = 3*row + col.
  static BeamPattern hex9(double spacing_m, double beamwidth_3db_deg,
                          double boresight_gain_dbi = 52.0,
                          double sidelobe_floor_db = -30.0,
                          double satellite_height_m = 35786e3) {
    BeamPattern p;
    const double h = spacing_m * std::sqrt(3.0) / 2.0;
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col)
        p.centers_m.emplace_back((col - 1) * spacing_m + (row - 1) * spacing_m / 2.0,
                                 (row - 1) * h);
    p.beamwidth_3db_deg = beamwidth_3db_deg;
    p.boresight_gain_dbi = boresight_gain_dbi;
    p.sidelobe_floor_db = sidelobe_floor_db;
    p.satellite_height_m = satellite_height_m;
    p.footprint_radius_m = spacing_m / 2.0;
    return p;
  }
};

/// Frequency/polarization coloring of the hex9 layout with 4 colors:
/// rows alternate {0,1,0} / {2,3,2}, so lattice neighbors never share a color.
inline std::vector<int> hex9_four_coloring() {
  std::vector<int> colors(9);
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col)
      colors[3 * row + col] = (col % 2) + 2 * (row % 2);
  return colors;
}

}  // namespace satprec

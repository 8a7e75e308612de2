// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <vector>

#include "satprec/beams.hpp"
#include "satprec/common.hpp"
#include "satprec/rng.hpp"

namespace satprec {

/// Link budget inputs. The noise term sqrt(kappa*T_cs*W_bw) is folded into
/// the channel magnitudes, so downstream SINR computations use unit noise
/// power per user.
struct LinkBudgetParams {
  double frequency_hz = 20e9;   // carrier
  double t_cs_k = 235.3;        // clear-sky noise temperature, T_cs
  double w_bw_hz = 500e6;       // user link bandwidth, W_bw
  double g_r_dbi = 40.7;        // receive antenna gain, G_R
  double p_tot_dbw = 55.0;      // on-board power, P_tot
  double obo_db = 5.0;          // output back-off, OBO
  double alpha = 0.20;          // roll-off
  double boltzmann = kBoltzmann;

  void validate() const {
    if (frequency_hz <= 0.0) throw config_error("link budget: frequency must be > 0");
    if (t_cs_k <= 0.0) throw config_error("link budget: T_cs must be > 0");
    if (w_bw_hz <= 0.0) throw config_error("link budget: W_bw must be > 0");
    if (boltzmann <= 0.0) throw config_error("link budget: Boltzmann constant must be > 0");
    if (obo_db < 0.0) throw config_error("link budget: OBO must be >= 0");
    if (alpha < 0.0 || alpha >= 1.0) throw config_error("link budget: alpha must be in [0,1)");
  }

  double wavelength_m() const { return kSpeedOfLight / frequency_hz; }

  /// Power left after back-off, P_tot - OBO in the dB domain, in watts.
  double available_power_w() const { return db_to_lin(p_tot_dbw - obo_db); }
};

/// One random placement of N_u = rho * N_t users over the beam footprints.
/// Users are stored slot-major: user index i*G + k is the i-th user of beam
/// k. Each beam draws from its own child stream, so a drop with rho users
/// per beam is a prefix of the drop with rho+1 under the same seed.
struct UserDrop {
  std::vector<Vec2> positions_m;
  RVec slant_range_m;
  std::vector<int> home_beam;
  int users_per_beam = 0;
  std::uint64_t seed = 0;

  int n_users() const { return static_cast<int>(positions_m.size()); }
};

inline UserDrop drop_users(const BeamPattern& pattern, int users_per_beam,
                           std::uint64_t seed) {
  pattern.validate();
  if (users_per_beam < 1) throw config_error("drop_users: rho must be >= 1");
  const int g = pattern.n_beams();
  const int n = users_per_beam * g;

  UserDrop drop;
  drop.positions_m.resize(n);
  drop.slant_range_m.resize(n);
  drop.home_beam.resize(n);
  drop.users_per_beam = users_per_beam;
  drop.seed = seed;

  for (int k = 0; k < g; ++k) {
    Rng rng(derive_seed(seed, seed_tag::kUserDrop, static_cast<std::uint64_t>(k)));
    for (int i = 0; i < users_per_beam; ++i) {
      // Uniform over the footprint disc.
      const double r = pattern.footprint_radius_m * std::sqrt(rng.uniform());
      const double a = 2.0 * M_PI * rng.uniform();
      const Vec2 pos = pattern.centers_m[k] + Vec2(r * std::cos(a), r * std::sin(a));
      const int idx = i * g + k;
      drop.positions_m[idx] = pos;
      drop.slant_range_m[idx] = pattern.slant_range_m(pos);
      drop.home_beam[idx] = k;
    }
  }
  return drop;
}

/// Real channel magnitude matrix B. Entry (i,j) combines the beam gain
/// toward user i from feed j, the free-space path, the receive gain and the
/// noise normalization:
///   b_ij = sqrt(G_R * G_ij) / (4*pi * (d_i/lambda) * sqrt(kappa*T_cs*W_bw)).
inline RMat link_budget_matrix(const UserDrop& drop, const BeamPattern& pattern,
                               const LinkBudgetParams& params) {
  params.validate();
  const int n = drop.n_users();
  const int g = pattern.n_beams();
  if (n == 0) throw config_error("link_budget_matrix: empty user drop");

  const double g_r = db_to_lin(params.g_r_dbi);
  const double noise = std::sqrt(params.boltzmann * params.t_cs_k * params.w_bw_hz);
  const double lambda = params.wavelength_m();

  RMat b(n, g);
  for (int i = 0; i < n; ++i) {
    const double d = drop.slant_range_m[i];
    if (d <= 0.0) throw config_error("link_budget_matrix: slant range must be > 0");
    const double denom = 4.0 * M_PI * (d / lambda) * noise;
    for (int j = 0; j < g; ++j)
      b(i, j) = std::sqrt(g_r * pattern.gain_linear(drop.positions_m[i], j)) / denom;
  }
  return b;
}

enum class PhaseMode { kUniform, kZero };

/// Complex channel H = Phi_p * B with one common phase per user (row).
struct ChannelMatrix {
  CMat h;
  RMat b;
  RVec phase_rad;

  int n_users() const { return static_cast<int>(h.rows()); }
  int n_antennas() const { return static_cast<int>(h.cols()); }
};

/// Applies the diagonal phase matrix. Row r draws its phase from the child
/// stream (seed, r), uniform on (0, 2*pi]; rows therefore keep their phases
/// when further rows are appended under the same seed.
inline ChannelMatrix apply_phases(const RMat& b, std::uint64_t seed,
                                  PhaseMode mode = PhaseMode::kUniform) {
  if ((b.array() < 0.0).any())
    throw config_error("apply_phases: magnitude matrix must be non-negative");
  ChannelMatrix ch;
  ch.b = b;
  ch.phase_rad.resize(b.rows());
  ch.h.resize(b.rows(), b.cols());
  for (int r = 0; r < b.rows(); ++r) {
    double phi = 0.0;
    if (mode == PhaseMode::kUniform) {
      Rng rng(derive_seed(seed, seed_tag::kPhases, static_cast<std::uint64_t>(r)));
      phi = rng.phase();
    }
    ch.phase_rad[r] = phi;
    ch.h.row(r) = std::polar(1.0, phi) * b.row(r);
  }
  return ch;
}

/// Partition of users into one multicast group per beam.
struct GroupSchedule {
  std::vector<std::vector<int>> groups;  // ascending user indices
  int users_per_group = 0;

  int n_groups() const { return static_cast<int>(groups.size()); }
  int n_users() const { return n_groups() * users_per_group; }

  void validate(int total_users) const {
    if (groups.empty()) throw config_error("schedule: no groups");
    std::vector<char> seen(total_users, 0);
    for (const auto& grp : groups) {
      if (static_cast<int>(grp.size()) != users_per_group)
        throw config_error("schedule: ragged groups (all groups must have rho users)");
      for (int u : grp) {
        if (u < 0 || u >= total_users) throw config_error("schedule: user index out of range");
        if (seen[u]) throw config_error("schedule: user assigned to two groups");
        seen[u] = 1;
      }
    }
    if (n_users() != total_users)
      throw config_error("schedule: groups do not cover all users");
  }

  /// Group of user u, or -1.
  int group_of(int u) const {
    for (int k = 0; k < n_groups(); ++k)
      if (std::binary_search(groups[k].begin(), groups[k].end(), u)) return k;
    return -1;
  }
};

/// Assigns every user to the beam with the strongest gain toward it (ties:
/// lowest beam index) and sorts each group by user index.
inline GroupSchedule group_by_strongest_gain(const UserDrop& drop,
                                             const BeamPattern& pattern) {
  GroupSchedule sched;
  sched.groups.assign(pattern.n_beams(), {});
  for (int u = 0; u < drop.n_users(); ++u)
    sched.groups[pattern.strongest_beam(drop.positions_m[u])].push_back(u);
  for (auto& grp : sched.groups) std::sort(grp.begin(), grp.end());
  sched.users_per_group = drop.users_per_beam;
  sched.validate(drop.n_users());
  return sched;
}

/// Splits the N_u x N_t channel into rho square one-user-per-beam slices:
/// row k of slice i is the channel row of the i-th (index-sorted) user of
/// group k. The slices partition the rows of H.
inline std::vector<CMat> slice_equivalent_channels(const CMat& h,
                                                   const GroupSchedule& sched) {
  const int g = sched.n_groups();
  const int rho = sched.users_per_group;
  sched.validate(static_cast<int>(h.rows()));
  if (static_cast<int>(h.cols()) != g)
    throw config_error("slice: schedule group count must equal antenna count");

  std::vector<CMat> slices(rho, CMat(g, g));
  for (int k = 0; k < g; ++k)
    for (int i = 0; i < rho; ++i)
      slices[i].row(k) = h.row(sched.groups[k][i]);
  return slices;
}

}  // namespace satprec

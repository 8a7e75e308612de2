// SPDX-License-Identifier: Apache-2.0
//
// Test-side oracles. Everything here is independent of the library's solver
// path: finite differences for gradients, closed-form two-group power
// control and exhaustive direction search for tiny max-min instances.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "satprec/common.hpp"
#include "satprec/maxmin.hpp"

namespace oracles {

using satprec::CMat;
using satprec::CVec;
using satprec::RVec;
using satprec::cxd;

/// Central finite-difference gradient of a real cost over the re/im parts of
/// a complex matrix, packed in the same layout as mmse_cost_gradient.
inline CMat finite_difference_gradient(const std::function<double(const CMat&)>& cost,
                                       const CMat& w, double h = 1e-6) {
  CMat g(w.rows(), w.cols());
  for (int r = 0; r < w.rows(); ++r) {
    for (int c = 0; c < w.cols(); ++c) {
      CMat wp = w, wm = w;
      wp(r, c) += h;
      wm(r, c) -= h;
      const double dre = (cost(wp) - cost(wm)) / (2.0 * h);
      wp = w;
      wm = w;
      wp(r, c) += cxd(0.0, h);
      wm(r, c) -= cxd(0.0, h);
      const double dim = (cost(wp) - cost(wm)) / (2.0 * h);
      g(r, c) = cxd(dre, dim);
    }
  }
  return g;
}

/// Minimal power pair solving the two-group balancing constraints at level t
/// with fixed directions, or nullopt when no finite fixed point exists.
/// Each group's requirement is the max over its members of a linear map of
/// the other group's power, so the minimal fixed point is the intersection
/// of one linear piece per group, checked against all pieces.
inline std::optional<std::array<double, 2>> two_group_min_powers(
    double t, const satprec::FairnessProblem& prob, const satprec::RMat& gains) {
  const auto& g1 = prob.sched.groups[0];
  const auto& g2 = prob.sched.groups[1];

  auto pieces = [&](const std::vector<int>& grp, int own, int other) {
    std::vector<std::array<double, 2>> out;  // q_own >= alpha*q_other + beta
    for (int i : grp) {
      const double a_own = gains(i, own);
      if (a_own <= 1e-300) return std::vector<std::array<double, 2>>{};
      out.push_back({t * prob.gamma[i] * gains(i, other) / a_own,
                     t * prob.gamma[i] * prob.sigma2[i] / a_own});
    }
    return out;
  };
  const auto p1 = pieces(g1, 0, 1);
  const auto p2 = pieces(g2, 1, 0);
  if (p1.empty() || p2.empty()) return std::nullopt;

  std::optional<std::array<double, 2>> best;
  for (const auto& [a1, b1] : p1) {
    for (const auto& [a2, b2] : p2) {
      const double prod = a1 * a2;
      if (prod >= 1.0) continue;
      const double q1 = (a1 * b2 + b1) / (1.0 - prod);
      const double q2 = a2 * q1 + b2;
      if (q1 < 0.0 || q2 < 0.0) continue;
      bool valid = true;  // active pieces must dominate all others
      for (const auto& [a, b] : p1)
        if (q1 < a * q2 + b - 1e-9 * (1.0 + q1)) valid = false;
      for (const auto& [a, b] : p2)
        if (q2 < a * q1 + b - 1e-9 * (1.0 + q2)) valid = false;
      if (!valid) continue;
      if (!best || q1 + q2 < (*best)[0] + (*best)[1]) best = {q1, q2};
    }
  }
  return best;
}

/// Best min weighted SINR achievable with the given unit directions under
/// the per-antenna limits, via bisection on t over the closed-form minimal
/// powers. Returns 0 when the directions cannot serve some user.
inline double two_group_power_control(const satprec::FairnessProblem& prob,
                                      const CMat& dirs) {
  const satprec::RMat gains = (prob.h * dirs).cwiseAbs2();
  const satprec::RMat pac = dirs.cwiseAbs2().transpose();  // (k, n)

  auto feasible = [&](double t, std::array<double, 2>& q_out) {
    const auto q = two_group_min_powers(t, prob, gains);
    if (!q) return false;
    for (int n = 0; n < prob.n_antennas(); ++n)
      if (pac(0, n) * (*q)[0] + pac(1, n) * (*q)[1] >
          prob.budget_w[n] * (1.0 + 1e-12))
        return false;
    q_out = *q;
    return true;
  };

  double lo = 0.0, hi = satprec::interference_free_bound(prob) * 1.01;
  std::array<double, 2> q{0.0, 0.0}, q_try{};
  for (int it = 0; it < 80 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid, q_try)) {
      lo = mid;
      q = q_try;
    } else {
      hi = mid;
    }
  }
  if (lo <= 0.0) return 0.0;

  // Spend remaining headroom, then score exactly.
  double scale = std::numeric_limits<double>::infinity();
  for (int n = 0; n < prob.n_antennas(); ++n) {
    const double used = pac(0, n) * q[0] + pac(1, n) * q[1];
    if (used > 0.0) scale = std::min(scale, prob.budget_w[n] / used);
  }
  if (std::isfinite(scale) && scale > 1.0) {
    q[0] *= scale;
    q[1] *= scale;
  }
  CMat w = dirs;
  w.col(0) *= std::sqrt(q[0]);
  w.col(1) *= std::sqrt(q[1]);
  const RVec s = satprec::sinr(prob.h, w, prob.sched, prob.sigma2);
  return (s.array() / prob.gamma.array()).minCoeff();
}

/// Exhaustive discretized search over precoder directions for N_t = 2,
/// G = 2: each unit column is (cos phi, sin phi * e^{i psi}) up to an
/// irrelevant global phase; powers are handled exactly by the closed-form
/// power control. Two zoom rounds refine the winning cell.
inline double brute_force_maxmin(const satprec::FairnessProblem& prob,
                                 int n_phi = 11, int n_psi = 14, int zooms = 2) {
  struct Box {
    double phi_lo, phi_hi, psi_lo, psi_hi;
  };
  std::array<Box, 2> box{Box{0.0, M_PI / 2.0, 0.0, 2.0 * M_PI},
                         Box{0.0, M_PI / 2.0, 0.0, 2.0 * M_PI}};

  auto dir = [](double phi, double psi) {
    CVec v(2);
    v << cxd(std::cos(phi), 0.0), std::polar(std::sin(phi), psi);
    return v;
  };

  double best = 0.0;
  std::array<std::array<double, 2>, 2> best_angles{{{0.0, 0.0}, {0.0, 0.0}}};
  for (int round = 0; round <= zooms; ++round) {
    std::array<std::vector<std::array<double, 2>>, 2> grids;
    for (int k = 0; k < 2; ++k) {
      for (int a = 0; a < n_phi; ++a) {
        const double phi = box[k].phi_lo + (box[k].phi_hi - box[k].phi_lo) * a /
                                               std::max(n_phi - 1, 1);
        for (int b = 0; b < n_psi; ++b) {
          const double psi = box[k].psi_lo + (box[k].psi_hi - box[k].psi_lo) * b /
                                                 std::max(n_psi - 1, 1);
          grids[k].push_back({phi, psi});
        }
      }
    }
    for (const auto& [phi1, psi1] : grids[0]) {
      for (const auto& [phi2, psi2] : grids[1]) {
        CMat dirs(2, 2);
        dirs.col(0) = dir(phi1, psi1);
        dirs.col(1) = dir(phi2, psi2);
        const double t = two_group_power_control(prob, dirs);
        if (t > best) {
          best = t;
          best_angles = {{{phi1, psi1}, {phi2, psi2}}};
        }
      }
    }
    // Shrink each box around the winner for the next round.
    for (int k = 0; k < 2; ++k) {
      const double dphi = (box[k].phi_hi - box[k].phi_lo) / std::max(n_phi - 1, 1);
      const double dpsi = (box[k].psi_hi - box[k].psi_lo) / std::max(n_psi - 1, 1);
      box[k].phi_lo = std::max(0.0, best_angles[k][0] - 1.5 * dphi);
      box[k].phi_hi = std::min(M_PI / 2.0, best_angles[k][0] + 1.5 * dphi);
      box[k].psi_lo = best_angles[k][1] - 1.5 * dpsi;
      box[k].psi_hi = best_angles[k][1] + 1.5 * dpsi;
    }
  }
  return best;
}

}  // namespace oracles

// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "satprec/channel.hpp"
#include "satprec/common.hpp"

namespace satprec {

/// Per-antenna power limits P_n in linear watts.
struct PowerBudget {
  RVec per_antenna_w;

  void validate() const {
    if (per_antenna_w.size() == 0) throw config_error("power budget: empty");
    if ((per_antenna_w.array() <= 0.0).any())
      throw config_error("power budget: all limits must be > 0");
  }

  double total_w() const { return per_antenna_w.sum(); }

  /// Equal split of an available total across n antennas.
  static PowerBudget uniform(double total_w, int n) {
    if (n < 1 || total_w <= 0.0) throw config_error("power budget: invalid uniform split");
    PowerBudget b;
    b.per_antenna_w = RVec::Constant(n, total_w / n);
    return b;
  }
};

/// P_n = [W W^H]_nn, the squared row norms.
inline RVec per_antenna_power(const CMat& w) {
  return w.rowwise().squaredNorm();
}

/// Total radiated power tr(W W^H).
inline double total_power(const CMat& w) { return w.squaredNorm(); }

/// Per-user SINR under precoder W: user i of group k sees
/// |w_k^H h_i|^2 / (sum_{l != k} |w_l^H h_i|^2 + sigma_i^2).
inline RVec sinr(const CMat& h, const CMat& w, const GroupSchedule& sched,
                 const RVec& sigma2) {
  const int n_u = static_cast<int>(h.rows());
  if (sigma2.size() != n_u) throw config_error("sinr: sigma2 size mismatch");
  sched.validate(n_u);

  const CMat rx = h * w;  // rx(i,l) = h_i^H w_l up to conjugation; |.|^2 matches
  RVec out(n_u);
  for (int k = 0; k < sched.n_groups(); ++k) {
    for (int i : sched.groups[k]) {
      const double sig = std::norm(rx(i, k));
      const double tot = rx.row(i).squaredNorm();
      out[i] = sig / (tot - sig + sigma2[i]);
    }
  }
  return out;
}

inline RVec sinr(const CMat& h, const CMat& w, const GroupSchedule& sched,
                 double sigma2 = 1.0) {
  return sinr(h, w, sched, RVec::Constant(h.rows(), sigma2));
}

/// Multicast-aware MMSE cost over the equivalent channel slices:
///   sum_i tr[(H_i W - I)(H_i W - I)^H] + rho*beta*tr[W W^H].
inline double mmse_cost(const CMat& w, const std::vector<CMat>& slices, double beta) {
  if (beta < 0.0) throw config_error("mmse_cost: beta must be >= 0");
  const int n = static_cast<int>(w.rows());
  double c = 0.0;
  for (const CMat& hi : slices)
    c += (hi * w - CMat::Identity(n, n)).squaredNorm();
  c += static_cast<double>(slices.size()) * beta * w.squaredNorm();
  return c;
}

/// Gradient of mmse_cost with respect to the real/imag parts of W, packed as
/// a complex matrix G: dC = Re tr(G^H dW). Perturbing Re(W_ab) moves the
/// cost by Re(G_ab), perturbing Im(W_ab) by Im(G_ab).
inline CMat mmse_cost_gradient(const CMat& w, const std::vector<CMat>& slices,
                               double beta) {
  const int n = static_cast<int>(w.rows());
  CMat g = CMat::Zero(n, n);
  for (const CMat& hi : slices) g += hi.adjoint() * (hi * w - CMat::Identity(n, n));
  g += static_cast<double>(slices.size()) * beta * w;
  return 2.0 * g;
}

/// Closed-form MMSE precoder for the stacked one-user-per-beam slices:
///   W = ((1/rho) sum_i H_i^H H_i + beta*I)^{-1} (1/rho) sum_i H_i^H.
inline CMat mmse_precoder(const std::vector<CMat>& slices, double beta) {
  if (slices.empty()) throw config_error("mmse_precoder: no channel slices");
  if (beta < 0.0) throw config_error("mmse_precoder: beta must be >= 0");
  const int n = static_cast<int>(slices[0].rows());
  const double rho = static_cast<double>(slices.size());

  CMat gram = CMat::Zero(n, n);
  CMat rhs = CMat::Zero(n, n);
  for (const CMat& hi : slices) {
    gram += hi.adjoint() * hi;
    rhs += hi.adjoint();
  }
  gram /= rho;
  rhs /= rho;
  const CMat a = gram + beta * CMat::Identity(n, n);

  Eigen::FullPivLU<CMat> lu(a);
  if (!lu.isInvertible())
    throw numerical_error("mmse_precoder: singular system (rank " +
                          std::to_string(lu.rank()) + " of " + std::to_string(n) +
                          "); a positive beta regularizes it");
  return lu.solve(rhs);
}

/// Scales each row of W by min(1, sqrt(P_n / [W W^H]_nn)) so the per-antenna
/// constraints hold; rows already within budget are left untouched.
inline CMat rescale_to_pac(const CMat& w, const PowerBudget& budget) {
  budget.validate();
  if (w.rows() != budget.per_antenna_w.size())
    throw config_error("rescale_to_pac: budget size mismatch");
  CMat out = w;
  const RVec p = per_antenna_power(w);
  for (int n = 0; n < w.rows(); ++n)
    if (p[n] > budget.per_antenna_w[n])
      out.row(n) *= std::sqrt(budget.per_antenna_w[n] / p[n]);
  return out;
}

/// SINRs plus the bandwidth fraction available to each frame; precoded
/// full-reuse strategies use fraction 1, the 4-color baseline 1/4.
struct RateInputs {
  RVec sinr_linear;
  double bandwidth_fraction = 1.0;
};

/// Conventional 4-color frequency reuse: every beam transmits its own frame
/// at full per-antenna power on one of four colors, so a user only sees
/// interference from co-color beams. Spectral efficiency is later scaled by
/// the 1/4 bandwidth fraction.
inline RateInputs four_color_baseline(const CMat& h, const GroupSchedule& sched,
                                      const PowerBudget& budget,
                                      const std::vector<int>& coloring,
                                      const RVec& sigma2) {
  budget.validate();
  const int g = sched.n_groups();
  const int n_u = static_cast<int>(h.rows());
  sched.validate(n_u);
  if (static_cast<int>(coloring.size()) != g)
    throw config_error("four_color: coloring must assign one color per beam");
  for (int c : coloring)
    if (c < 0 || c > 3)
      throw config_error("four_color: colors must come from a palette of 4 (0..3)");
  if (sigma2.size() != n_u) throw config_error("four_color: sigma2 size mismatch");

  RateInputs out;
  out.bandwidth_fraction = 0.25;
  out.sinr_linear.resize(n_u);
  for (int k = 0; k < g; ++k) {
    for (int i : sched.groups[k]) {
      const double sig = budget.per_antenna_w[k] * std::norm(h(i, k));
      double intf = 0.0;
      for (int l = 0; l < g; ++l)
        if (l != k && coloring[l] == coloring[k])
          intf += budget.per_antenna_w[l] * std::norm(h(i, l));
      out.sinr_linear[i] = sig / (intf + sigma2[i]);
    }
  }
  return out;
}

inline RateInputs four_color_baseline(const CMat& h, const GroupSchedule& sched,
                                      const PowerBudget& budget,
                                      const std::vector<int>& coloring,
                                      double sigma2 = 1.0) {
  return four_color_baseline(h, sched, budget, coloring,
                             RVec::Constant(h.rows(), sigma2));
}

}  // namespace satprec

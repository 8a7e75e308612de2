// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "satprec/conic.hpp"
#include "satprec/csv.hpp"
#include "satprec/precoding.hpp"
#include "satprec/rng.hpp"

namespace satprec {

/// Weighted max-min fair multigroup multicast instance: maximize the minimum
/// of SINR_i / gamma_i over all users, subject to per-antenna power limits.
struct FairnessProblem {
  CMat h;                // N_u x N_t channel
  GroupSchedule sched;   // one multicast group per antenna/beam
  RVec gamma;            // positive SINR targets (weights)
  RVec sigma2;           // per-user noise powers
  RVec budget_w;         // per-antenna limits, linear watts

  int n_users() const { return static_cast<int>(h.rows()); }
  int n_antennas() const { return static_cast<int>(h.cols()); }
  int n_groups() const { return sched.n_groups(); }

  void validate() const {
    sched.validate(n_users());
    if (n_groups() != n_antennas())
      throw config_error("fairness problem: one group per antenna required");
    if (gamma.size() != n_users() || (gamma.array() <= 0.0).any())
      throw config_error("fairness problem: gamma must be positive per user");
    if (sigma2.size() != n_users() || (sigma2.array() <= 0.0).any())
      throw config_error("fairness problem: sigma2 must be positive per user");
    if (budget_w.size() != n_antennas() || (budget_w.array() <= 0.0).any())
      throw config_error("fairness problem: budget must be positive per antenna");
  }

  static FairnessProblem make(const CMat& h, const GroupSchedule& sched,
                              const PowerBudget& budget, double gamma = 1.0,
                              double sigma2 = 1.0) {
    FairnessProblem p;
    p.h = h;
    p.sched = sched;
    p.gamma = RVec::Constant(h.rows(), gamma);
    p.sigma2 = RVec::Constant(h.rows(), sigma2);
    p.budget_w = budget.per_antenna_w;
    p.validate();
    return p;
  }
};

struct MaxminConfig {
  double eps_bisect = 1e-3;      // relative bisection tolerance on t
  double conic_tol = 1e-7;       // conic solver tolerance
  int n_rand = 100;              // Gaussian randomization candidates
  std::uint64_t seed = 0;
  int max_bisect_steps = 64;
  bool rank1_refine = true;      // drive the bound gap under 1e-4 when tight
  double rank_ratio = 1e-6;      // eigenvalue ratio for numerical rank
  int pc_max_iterations = 500;   // fixed-point iterations per power-control check
  std::shared_ptr<SdrSolver> solver;  // defaults to the built-in interior point
};

/// Relaxation iterate: one PSD matrix per group at candidate level t.
struct SdrIterate {
  std::vector<CMat> x;
  double t = 0.0;
};

struct BisectionStep {
  double t = 0.0;
  bool feasible = false;
};

struct SolverReport {
  CMat w;                             // recovered precoder, one column per group
  double t_achieved = 0.0;            // exact min weighted SINR of w
  double t_sdr_bound = 0.0;           // certified upper bound from the relaxation
  std::vector<BisectionStep> bisection_trace;
  int n_randomizations = 0;
  std::vector<int> ranks;             // numerical rank of each X_k
  bool degenerate = false;            // all candidates scored zero
  int feasibility_solves = 0;
};

namespace detail {

inline const SdrSolver& solver_of(const MaxminConfig& cfg) {
  static const InteriorPointSdrSolver builtin;
  return cfg.solver ? *cfg.solver : static_cast<const SdrSolver&>(builtin);
}

inline ConicSolverOptions conic_options(const MaxminConfig& cfg) {
  ConicSolverOptions opt;
  opt.gap_tol = 0.1 * cfg.conic_tol;
  return opt;
}

}  // namespace detail

/// Standard SDR of Problem F at level t: lift w_k to X_k = w_k w_k^H, drop
/// rank-1, and ask for PSD X_k with
///   h_i^H X_k h_i >= t * gamma_i * (sum_{l != k} h_i^H X_l h_i + sigma_i^2)
/// for every user i of group k, under sum_k [X_k]_nn <= P_n.
inline ConicFeasibilityProblem build_sdr_problem(const FairnessProblem& prob,
                                                 double t) {
  prob.validate();
  if (t < 0.0) throw config_error("sdr_feasibility: t must be >= 0");
  const int g = prob.n_groups();
  const int nt = prob.n_antennas();

  ConicFeasibilityProblem p;
  p.block_dims.assign(g, nt);
  p.variable_scale = prob.budget_w.mean() / g;

  for (int k = 0; k < g; ++k) {
    for (int i : prob.sched.groups[k]) {
      const CVec hi = prob.h.row(i).adjoint();  // column vector h_i
      const CMat q = hi * hi.adjoint();
      ConicBlockConstraint c;
      c.coeff.assign(g, CMat());
      c.rank1_factor = hi;
      c.rank1_weight.resize(g);
      for (int l = 0; l < g; ++l) {
        const double w = (l == k) ? 1.0 : -t * prob.gamma[i];
        c.coeff[l] = w * q;
        c.rank1_weight[l] = w;
      }
      c.constant = -t * prob.gamma[i] * prob.sigma2[i];
      c.slack_coef = -1.0;
      p.constraints.push_back(std::move(c));
    }
  }
  for (int n = 0; n < nt; ++n) {
    ConicBlockConstraint c;
    CMat e = CMat::Zero(nt, nt);
    e(n, n) = -1.0;
    c.coeff.assign(g, e);
    c.diag_index = n;
    c.diag_weight = RVec::Constant(g, -1.0);
    c.constant = prob.budget_w[n];
    c.slack_coef = 0.0;
    p.constraints.push_back(std::move(c));
  }
  return p;
}

struct SdrFeasibilityResult {
  bool feasible = false;
  SdrIterate iterate;
  ConicSolution raw;
};

/// One relaxation feasibility check. Infeasibility follows the phase-1 rule:
/// the maximized slack stays below -1e-6 (in row-normalized units).
inline SdrFeasibilityResult sdr_feasibility(const FairnessProblem& prob, double t,
                                            const MaxminConfig& cfg = {},
                                            bool polish = false) {
  ConicSolverOptions opt = detail::conic_options(cfg);
  opt.early_exit = !polish;
  SdrFeasibilityResult res;
  try {
    res.raw = detail::solver_of(cfg).maximize_slack(build_sdr_problem(prob, t), opt);
  } catch (const numerical_error& e) {
    throw numerical_error("sdr_feasibility(t=" + std::to_string(t) + "): " + e.what());
  }
  res.feasible = res.raw.feasible;
  if (res.feasible) {
    res.iterate.x = res.raw.blocks;
    res.iterate.t = t;
  }
  return res;
}

/// Interference-free upper bound on t*: even alone on the full array power,
/// user i cannot exceed ||h_i||^2 * sum_n P_n / (gamma_i * sigma_i^2).
inline double interference_free_bound(const FairnessProblem& prob) {
  const double p_sum = prob.budget_w.sum();
  double bound = 0.0;
  for (int i = 0; i < prob.n_users(); ++i)
    bound = std::max(bound, p_sum * prob.h.row(i).squaredNorm() /
                                (prob.gamma[i] * prob.sigma2[i]));
  return bound;
}

struct BisectionResult {
  double t_feasible = 0.0;    // largest grid point with a feasible relaxation
  double t_upper = 0.0;       // certified infeasible upper bracket
  SdrIterate iterate;
};

/// Bisection on t over relaxation feasibility checks. The trace is appended
/// in call order and must stay monotone (no feasible point above an
/// infeasible one).
inline BisectionResult bisect_fairness(const FairnessProblem& prob, double t_lo,
                                       double t_hi, double eps_bisect,
                                       const MaxminConfig& cfg,
                                       std::vector<BisectionStep>& trace,
                                       int& solves) {
  auto check = [&](double t) {
    auto r = sdr_feasibility(prob, t, cfg);
    trace.push_back({t, r.feasible});
    ++solves;
    return r;
  };

  auto lo_res = check(t_lo);
  if (!lo_res.feasible)
    throw numerical_error("bisect_fairness: lower bound t_lo=" + std::to_string(t_lo) +
                          " is infeasible");
  BisectionResult out;
  out.t_feasible = t_lo;
  out.iterate = lo_res.iterate;

  for (int expand = 0;; ++expand) {
    auto hi_res = check(t_hi);
    if (!hi_res.feasible) break;
    // The caller's upper bound was not actually a bound; retry wider.
    out.t_feasible = t_hi;
    out.iterate = hi_res.iterate;
    if (expand >= 3)
      throw numerical_error("bisect_fairness: upper bound still feasible after expansion");
    t_hi *= 10.0;
  }

  int steps = 0;
  double lo = out.t_feasible, hi = t_hi;
  while (hi - lo > eps_bisect * std::max(lo, 1e-12) && hi > 1e-12 &&
         steps++ < cfg.max_bisect_steps) {
    const double mid = 0.5 * (lo + hi);
    auto r = check(mid);
    if (r.feasible) {
      lo = mid;
      out.iterate = r.iterate;
    } else {
      hi = mid;
    }
  }
  out.t_feasible = lo;
  out.t_upper = hi;
  return out;
}

/// Smallest relative constraint margin of lifted matrices at level t
/// (negative means some SINR or per-antenna constraint is violated).
inline double sdr_min_margin(const FairnessProblem& prob, double t,
                             const std::vector<CMat>& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < prob.n_groups(); ++k) {
    for (int i : prob.sched.groups[k]) {
      const CVec hi = prob.h.row(i).adjoint();
      double own = 0.0, intf = 0.0;
      for (int l = 0; l < prob.n_groups(); ++l) {
        const double q = (hi.adjoint() * x[l] * hi).value().real();
        if (l == k) own = q;
        else intf += q;
      }
      const double rhs = t * prob.gamma[i] * (intf + prob.sigma2[i]);
      worst = std::min(worst, (own - rhs) / (1.0 + std::abs(own) + std::abs(rhs)));
    }
  }
  for (int n = 0; n < prob.n_antennas(); ++n) {
    double used = 0.0;
    for (const CMat& xk : x) used += xk(n, n).real();
    worst = std::min(worst, (prob.budget_w[n] - used) / prob.budget_w[n]);
  }
  return worst;
}

/// Numerical rank of each PSD block: eigenvalues above `ratio` times the
/// largest one.
inline std::vector<int> numerical_ranks(const std::vector<CMat>& x,
                                        double ratio = 1e-6) {
  std::vector<int> ranks;
  for (const CMat& xk : x) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(xk);
    const double lmax = eig.eigenvalues().maxCoeff();
    int r = 0;
    if (lmax > 0.0)
      r = static_cast<int>((eig.eigenvalues().array() > ratio * lmax).count());
    ranks.push_back(r);
  }
  return ranks;
}

/// Gaussian randomization: candidate columns w_k = X_k^{1/2} v with v a
/// standard complex Gaussian. When every block is numerically rank one, the
/// scaled dominant eigenvectors are prepended as candidate 0.
inline std::vector<CMat> gaussian_randomize(const SdrIterate& iterate,
                                            const FairnessProblem& prob,
                                            int n_rand, std::uint64_t seed,
                                            double rank_ratio = 1e-6) {
  prob.validate();
  const int g = prob.n_groups();
  const int nt = prob.n_antennas();
  if (static_cast<int>(iterate.x.size()) != g)
    throw config_error("gaussian_randomize: iterate block count mismatch");

  std::vector<CMat> sqrt_x(g);
  CMat dominant(nt, g);
  bool all_rank1 = true;
  for (int k = 0; k < g; ++k) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(iterate.x[k]);
    const RVec lam = eig.eigenvalues().cwiseMax(0.0);
    sqrt_x[k] = eig.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                eig.eigenvectors().adjoint();
    const double lmax = lam.maxCoeff();
    if (lmax <= 0.0 || (lam.array() > rank_ratio * lmax).count() != 1)
      all_rank1 = false;
    dominant.col(k) = std::sqrt(std::max(lmax, 0.0)) * eig.eigenvectors().col(nt - 1);
  }

  std::vector<CMat> candidates;
  if (all_rank1) candidates.push_back(dominant);

  Rng rng(derive_seed(seed, seed_tag::kRandomize));
  for (int c = 0; c < n_rand; ++c) {
    CMat w(nt, g);
    for (int k = 0; k < g; ++k) {
      CVec v(nt);
      for (int j = 0; j < nt; ++j) v[j] = rng.cnormal();
      w.col(k) = sqrt_x[k] * v;
    }
    candidates.push_back(std::move(w));
  }
  return candidates;
}

struct PowerControlResult {
  CMat w;
  double t_achieved = 0.0;
  int best_index = -1;
  bool degenerate = false;  // every candidate scored zero
};

namespace detail {

/// One sweep of the monotone interference-function map
///   q_k -> t * max_{i in G_k} gamma_i (sum_{l != k} a_il q_l + s_i) / a_ik,
/// recording the maximizing user of each group. Returns false when some
/// group has zero gain toward one of its own users.
inline bool pc_interference_map(double t, const RMat& gains,
                                const FairnessProblem& prob, const RVec& q,
                                RVec& q_next, std::vector<int>& argmax) {
  const int g = prob.n_groups();
  for (int k = 0; k < g; ++k) {
    double need = 0.0;
    int who = -1;
    for (int i : prob.sched.groups[k]) {
      const double own = gains(i, k);
      if (own <= 1e-300) return false;
      double intf = prob.sigma2[i];
      for (int l = 0; l < g; ++l)
        if (l != k) intf += gains(i, l) * q[l];
      const double v = t * prob.gamma[i] * intf / own;
      if (v >= need) {
        need = v;
        who = i;
      }
    }
    q_next[k] = need;
    argmax[k] = who;
  }
  return true;
}

/// Fixed-direction feasibility at level t. The componentwise-minimal power
/// vector is the least fixed point of the interference map; iterating from
/// q = 0 approaches it monotonically, and once the per-group maximizing
/// users stop changing the limit is solved exactly from the active linear
/// system (I - t*G) q = t*c. Any iterate exceeding the per-antenna limits
/// certifies infeasibility, because iterates stay below every solution.
inline bool pc_feasible_at(double t, const RMat& gains, const RMat& pac_coef,
                           const FairnessProblem& prob, int max_iter, RVec& q_out) {
  const int g = prob.n_groups();
  RVec q = RVec::Zero(g), q_next(g);
  std::vector<int> argmax(g, -1);

  auto pac_ok = [&](const RVec& qq) {
    for (int n = 0; n < pac_coef.cols(); ++n)
      if (pac_coef.col(n).dot(qq) > prob.budget_w[n] * (1.0 + 1e-9)) return false;
    return true;
  };

  const int outer_max = std::max(max_iter / 10, 1);
  for (int outer = 0; outer < outer_max; ++outer) {
    for (int it = 0; it < 10; ++it) {
      if (!pc_interference_map(t, gains, prob, q, q_next, argmax)) return false;
      if (!pac_ok(q_next)) return false;
      if ((q_next - q).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + q.maxCoeff())) {
        q_out = q_next;
        return true;
      }
      q.swap(q_next);
    }

    // Active-set acceleration: solve the linear system of the current
    // maximizing users and verify it as a fixed point of the max-form.
    RMat sys = RMat::Identity(g, g);
    RVec rhs(g);
    for (int k = 0; k < g; ++k) {
      const int i = argmax[k];
      const double own = gains(i, k);
      for (int l = 0; l < g; ++l)
        if (l != k) sys(k, l) = -t * prob.gamma[i] * gains(i, l) / own;
      rhs[k] = t * prob.gamma[i] * prob.sigma2[i] / own;
    }
    const RVec q_lin = sys.partialPivLu().solve(rhs);
    if ((q_lin.array() >= 0.0).all()) {
      RVec check(g);
      std::vector<int> arg2(g);
      if (!pc_interference_map(t, gains, prob, q_lin, check, arg2)) return false;
      if ((check - q_lin).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + q_lin.maxCoeff())) {
        if (!pac_ok(q_lin)) return false;
        q_out = q_lin;
        return true;
      }
      // Sub-solution (map does not pull it down anywhere): provably below
      // the fixed point, so it is a safe accelerated iterate and a PAC
      // violation at it still certifies infeasibility.
      if ((check.array() >= q_lin.array() - 1e-12 * (1.0 + q_lin.maxCoeff())).all()) {
        if (!pac_ok(q_lin)) return false;
        q = q.cwiseMax(q_lin);
      }
    }
  }
  return false;  // undecided near the boundary counts as infeasible
}

}  // namespace detail

/// Fixed-direction power control: normalize each candidate's columns, then
/// find per-group powers q_k >= 0 maximizing the minimum weighted SINR under
/// sum_k q_k |w_kn|^2 <= P_n, by bisection over t with the linear feasibility
/// subproblem solved exactly by the monotone fixed point above. Returns the
/// best candidate after scaling; ties keep the lowest candidate index.
inline PowerControlResult power_control_fixed_directions(
    const std::vector<CMat>& candidates, const FairnessProblem& prob,
    double eps_rel = 1e-6, double eps_abs = 0.0, int max_iter = 500) {
  prob.validate();
  if (candidates.empty())
    throw config_error("power_control: at least one candidate required");
  const int g = prob.n_groups();
  const double t_cap = interference_free_bound(prob) * 1.01;

  PowerControlResult best;
  best.w = CMat::Zero(prob.n_antennas(), g);

  for (std::size_t c = 0; c < candidates.size(); ++c) {
    CMat dirs = candidates[c];
    bool dead_column = false;
    for (int k = 0; k < g; ++k) {
      const double nrm = dirs.col(k).norm();
      if (nrm <= 1e-300) {
        dead_column = true;
        break;
      }
      dirs.col(k) /= nrm;
    }
    if (dead_column) continue;  // a group with no beam direction scores 0

    const RMat gains = (prob.h * dirs).cwiseAbs2();        // a(i,l)
    const RMat pac_coef = dirs.cwiseAbs2().transpose();    // (k,n) -> |w_kn|^2

    auto headroom_scale = [&](const RVec& qq) {
      double scale = std::numeric_limits<double>::infinity();
      for (int n = 0; n < pac_coef.cols(); ++n) {
        const double used = pac_coef.col(n).dot(qq);
        if (used > 0.0) scale = std::min(scale, prob.budget_w[n] / used);
      }
      return std::isfinite(scale) ? scale : 1.0;
    };
    auto consider = [&](RVec qq, std::size_t index) {
      // Spending the remaining per-antenna headroom is SINR-non-decreasing
      // (and native candidate powers may need scaling down to feasibility).
      qq *= headroom_scale(qq);
      CMat w = dirs * qq.cwiseSqrt().asDiagonal();
      const RVec s = sinr(prob.h, w, prob.sched, prob.sigma2);
      const double t_ach = (s.array() / prob.gamma.array()).minCoeff();
      if (t_ach > best.t_achieved) {
        best.t_achieved = t_ach;
        best.w = std::move(w);
        best.best_index = static_cast<int>(index);
      }
    };

    // The candidate's own power split, pushed to the tightest antenna, is a
    // free lower bound; the bisection below can only improve on it.
    RVec q_native(g);
    for (int k = 0; k < g; ++k) q_native[k] = candidates[c].col(k).squaredNorm();
    consider(q_native, c);

    RVec q = RVec::Zero(g), q_try;
    double lo = 0.0, hi = t_cap;
    while (hi - lo > std::max(eps_rel * hi, eps_abs > 0.0 ? eps_abs : 1e-300) &&
           hi > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if (detail::pc_feasible_at(mid, gains, pac_coef, prob, max_iter, q_try)) {
        lo = mid;
        q = q_try;
      } else {
        hi = mid;
      }
    }
    if (lo > 0.0) consider(q, c);
  }
  best.degenerate = best.best_index < 0;
  if (best.degenerate) best.best_index = 0;
  return best;
}

/// Full Problem F pipeline: bisection over SDR feasibility, Gaussian
/// randomization, fixed-direction power control, and (when the relaxation is
/// numerically rank one) a refinement stage that tightens the certified
/// bound until it sits within 1e-4 of the achieved level.
inline SolverReport solve_maxmin_fair(const FairnessProblem& prob,
                                      const MaxminConfig& cfg = {}) {
  prob.validate();
  SolverReport rep;

  double t_hi = std::max(interference_free_bound(prob) * 1.01, 1e-9);
  BisectionResult bi;
  try {
    bi = bisect_fairness(prob, 0.0, t_hi, cfg.eps_bisect, cfg, rep.bisection_trace,
                         rep.feasibility_solves);
  } catch (const numerical_error& e) {
    throw numerical_error(std::string("solve_maxmin_fair[bisection]: ") + e.what());
  }

  // Re-center the final feasible level without early exit so randomization
  // starts from a well-conditioned iterate.
  try {
    auto polish = sdr_feasibility(prob, bi.t_feasible, cfg, /*polish=*/true);
    ++rep.feasibility_solves;
    if (polish.feasible) bi.iterate = polish.iterate;
  } catch (const numerical_error&) {
    // keep the bisection iterate
  }

  // Barrier centering keeps small eigenvalues alive; when the rank-one
  // truncation of the iterate still satisfies every constraint at this
  // level, adopt it (it is a genuine certificate and sharpens recovery).
  auto purify = [&](SdrIterate& it) {
    std::vector<CMat> trunc;
    for (const CMat& xk : it.x) {
      Eigen::SelfAdjointEigenSolver<CMat> eig(xk);
      const int top = static_cast<int>(xk.rows()) - 1;
      const double lmax = std::max(eig.eigenvalues()[top], 0.0);
      trunc.push_back(lmax * eig.eigenvectors().col(top) *
                      eig.eigenvectors().col(top).adjoint());
    }
    if (sdr_min_margin(prob, it.t, trunc) >= 0.0) it.x = std::move(trunc);
  };
  purify(bi.iterate);

  rep.ranks = numerical_ranks(bi.iterate.x, cfg.rank_ratio);

  auto run_recovery = [&](const SdrIterate& it, double pc_eps_abs) {
    auto cands = gaussian_randomize(it, prob, cfg.n_rand, cfg.seed, cfg.rank_ratio);
    rep.n_randomizations = static_cast<int>(cands.size());
    return power_control_fixed_directions(cands, prob, 1e-6, pc_eps_abs,
                                          cfg.pc_max_iterations);
  };

  PowerControlResult pc;
  try {
    pc = run_recovery(bi.iterate, 0.0);
  } catch (const numerical_error& e) {
    throw numerical_error(std::string("solve_maxmin_fair[recovery]: ") + e.what());
  }

  double t_lo = bi.t_feasible;
  double t_up = bi.t_upper > 0.0 ? bi.t_upper : t_hi;
  bool all_rank1 = std::all_of(rep.ranks.begin(), rep.ranks.end(),
                               [](int r) { return r == 1; });

  // Rank-1 tight case: the relaxation optimum is attainable, so keep
  // bisecting until the certified bound matches the achieved level to 1e-4.
  if (cfg.rank1_refine && all_rank1 && !pc.degenerate) {
    int extra = 0;
    while (t_up - pc.t_achieved > 0.9e-4 && extra++ < 60) {
      const double mid = 0.5 * (std::max(t_lo, pc.t_achieved) + t_up);
      if (!(mid > pc.t_achieved && mid < t_up)) break;  // bracket at fp floor
      SdrFeasibilityResult r;
      try {
        r = sdr_feasibility(prob, mid, cfg);
      } catch (const numerical_error& e) {
        throw numerical_error(std::string("solve_maxmin_fair[refine]: ") + e.what());
      }
      rep.bisection_trace.push_back({mid, r.feasible});
      ++rep.feasibility_solves;
      if (r.feasible) {
        t_lo = mid;
        purify(r.iterate);
        rep.ranks = numerical_ranks(r.iterate.x, cfg.rank_ratio);
        all_rank1 = std::all_of(rep.ranks.begin(), rep.ranks.end(),
                                [](int rr) { return rr == 1; });
        auto pc2 = run_recovery(r.iterate, 2e-5);
        if (pc2.t_achieved > pc.t_achieved) pc = pc2;
        if (!all_rank1) break;
      } else {
        t_up = mid;
      }
    }
  }

  rep.w = pc.w;
  rep.t_achieved = pc.t_achieved;
  rep.t_sdr_bound = t_up;
  rep.degenerate = pc.degenerate;

  // Report invariants.
  const RVec pw = per_antenna_power(rep.w);
  for (int n = 0; n < prob.n_antennas(); ++n)
    if (pw[n] > prob.budget_w[n] + 1e-9)
      throw numerical_error("solve_maxmin_fair: returned precoder violates PAC");
  if (rep.t_achieved > rep.t_sdr_bound + 1e-6)
    throw numerical_error("solve_maxmin_fair: achieved level above the SDR bound");
  double max_feas = 0.0, min_infeas = std::numeric_limits<double>::infinity();
  for (const auto& step : rep.bisection_trace) {
    if (step.feasible)
      max_feas = std::max(max_feas, step.t);
    else
      min_infeas = std::min(min_infeas, step.t);
  }
  if (max_feas > min_infeas)
    throw numerical_error("solve_maxmin_fair: non-monotone bisection trace");
  return rep;
}

/// Structured text report: one record per bisection step, then the achieved
/// levels and the final precoder in the shared complex CSV form.
inline void write_solver_report(const SolverReport& rep, std::ostream& os) {
  os.precision(17);
  os << "# max-min fair solver report\n";
  for (std::size_t i = 0; i < rep.bisection_trace.size(); ++i)
    os << "step," << i << ',' << rep.bisection_trace[i].t << ','
       << (rep.bisection_trace[i].feasible ? "feasible" : "infeasible") << '\n';
  os << "t_achieved," << rep.t_achieved << '\n';
  os << "t_sdr_bound," << rep.t_sdr_bound << '\n';
  os << "n_randomizations," << rep.n_randomizations << '\n';
  os << "feasibility_solves," << rep.feasibility_solves << '\n';
  os << "degenerate," << (rep.degenerate ? 1 : 0) << '\n';
  os << "ranks";
  for (int r : rep.ranks) os << ',' << r;
  os << "\nprecoder\n";
  write_complex_matrix_csv(rep.w, os);
}

inline void write_solver_report(const SolverReport& rep, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw config_error("write_solver_report: cannot open " + path);
  write_solver_report(rep, os);
}

}  // namespace satprec

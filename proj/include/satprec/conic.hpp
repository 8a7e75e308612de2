// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <atomic>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "satprec/common.hpp"

namespace satprec {

/// One linear inequality over a tuple of Hermitian blocks plus the slack
/// scalar s:  sum_k Re<coeff[k], X_k> + slack_coef * s + constant >= 0.
/// Rows that should not absorb slack (per-antenna limits) use slack_coef 0;
/// SINR rows use -1.
///
/// Optional structure hints (exploited by the built-in solver, ignored by
/// generic backends):
///  - rank1_factor/rank1_weight: coeff[k] == rank1_weight[k] * f f^H
///  - diag_index/diag_weight:    coeff[k] == diag_weight[k] * E_{nn}
struct ConicBlockConstraint {
  std::vector<CMat> coeff;
  double constant = 0.0;
  double slack_coef = 0.0;

  CVec rank1_factor;   // size 0 when unstructured
  RVec rank1_weight;
  int diag_index = -1;
  RVec diag_weight;
};

/// Max-slack feasibility problem over PSD blocks:
///   maximize s  s.t.  every constraint >= 0,  X_k >= 0 (PSD).
/// The original constraint set is feasible iff the optimum s* >= 0.
struct ConicFeasibilityProblem {
  std::vector<int> block_dims;
  std::vector<ConicBlockConstraint> constraints;
  /// Typical magnitude of the X entries (e.g. the mean per-antenna power);
  /// used only for internal preconditioning.
  double variable_scale = 1.0;
};

struct ConicSolverOptions {
  /// Target barrier gap on the normalized slack objective.
  double gap_tol = 1e-8;
  /// Declaration deadband: feasible iff s* >= -feas_margin (the phase-1
  /// rule: infeasible when the minimized constraint violation exceeds it).
  double feas_margin = 1e-6;
  int max_newton_total = 40000;
  int max_newton_inner = 80;
  double eta_growth = 8.0;
  double inner_decrement = 0.05;  // Newton decrement^2 threshold per stage
  bool early_exit = true;
};

struct ConicSolution {
  bool feasible = false;
  /// Best slack estimate in row-normalized units.
  double slack_star = 0.0;
  std::vector<CMat> blocks;  // natural units, strictly PSD
  int newton_steps = 0;
  double gap_bound = 0.0;
  std::string status;
};

/// Backend boundary: any conic solver able to run the max-slack problem at
/// the stated tolerance can be plugged in here (see write_conic_problem for
/// the matrix-data exchange format).
class SdrSolver {
 public:
  virtual ~SdrSolver() = default;
  virtual ConicSolution maximize_slack(const ConicFeasibilityProblem& problem,
                                       const ConicSolverOptions& options) const = 0;
};

/// Built-in dense barrier (path-following) interior-point solver.
///
/// The Newton system is Bhat + sum_j w_j g_j g_j^T, where g_j stacks the
/// row's block coefficients with its slack coefficient and Bhat is the
/// log-det Hessian extended by the slack cap's exact curvature. Bhat has a
/// closed-form inverse action (S -> Y S Y per block), so a Woodbury solve
/// of size m gives the direction. SINR rows are rank one and power rows
/// diagonal, which collapses the Woodbury Gram matrix to products of the
/// per-block matrices V_k = Y_k F and M_k = F^H Y_k F.
class InteriorPointSdrSolver final : public SdrSolver {
 public:
  ConicSolution maximize_slack(const ConicFeasibilityProblem& problem,
                               const ConicSolverOptions& opt) const override {
    ++solve_count_;
    Workspace ws(problem);
    return run(ws, opt);
  }

  /// Number of maximize_slack calls since process start (test instrumentation).
  static long solve_count() { return solve_count_.load(); }

 private:
  static inline std::atomic<long> solve_count_{0};

  // Normalized problem: rows sorted by representation, one slack-cap row.
  struct Workspace {
    int n_blocks = 0;
    int dim = 0;              // common block dimension (0 if mixed -> generic)
    std::vector<int> dims;
    double vs = 1.0;
    double nu = 0.0;
    int m = 0;                // user rows + cap

    // Per-row data, indexed by original order j = 0..m-2 (cap is j = m-1).
    std::vector<double> cst, u;
    // Representation tags and per-type indices.
    enum class Kind { kRank1, kDiag, kGeneric };
    std::vector<Kind> kind;
    std::vector<int> tidx;

    CMat factors;                    // dim x R1
    RMat w1;                         // R1 x G
    std::vector<int> diag_n;         // RD
    RMat wd;                         // RD x G
    std::vector<std::vector<CMat>> gen;  // generic rows' coefficients

    explicit Workspace(const ConicFeasibilityProblem& p) {
      n_blocks = static_cast<int>(p.block_dims.size());
      const int m_user = static_cast<int>(p.constraints.size());
      if (n_blocks == 0 || m_user == 0)
        throw config_error("conic solver: empty problem");
      dims = p.block_dims;
      vs = p.variable_scale > 0.0 ? p.variable_scale : 1.0;
      dim = dims[0];
      for (int d : dims)
        if (d != dim) dim = 0;

      m = m_user + 1;
      cst.resize(m);
      u.resize(m);
      kind.resize(m, Kind::kGeneric);
      tidx.resize(m, -1);

      int r1 = 0, rd = 0;
      for (int j = 0; j < m_user; ++j) {
        const auto& src = p.constraints[j];
        if (static_cast<int>(src.coeff.size()) != n_blocks)
          throw config_error("conic solver: constraint block count mismatch");
        if (src.slack_coef > 0.0)
          throw config_error("conic solver: slack coefficients must be <= 0");
        if (dim > 0 && src.rank1_factor.size() == dim &&
            src.rank1_weight.size() == n_blocks) {
          kind[j] = Kind::kRank1;
          ++r1;
        } else if (dim > 0 && src.diag_index >= 0 && src.diag_index < dim &&
                   src.diag_weight.size() == n_blocks) {
          kind[j] = Kind::kDiag;
          ++rd;
        }
      }

      factors.resize(dim > 0 ? dim : 0, r1);
      w1.resize(r1, n_blocks);
      diag_n.resize(rd);
      wd.resize(rd, n_blocks);

      int next_r1 = 0, next_rd = 0;
      for (int j = 0; j < m_user; ++j) {
        const auto& src = p.constraints[j];
        // Row scaling: unit norm over (coefficients, constant) after the
        // variable change X = vs * Y; the slack coefficient stays -1 so s
        // measures a relative margin.
        double norm2 = src.constant * src.constant;
        if (kind[j] == Kind::kRank1) {
          const double f2 = src.rank1_factor.squaredNorm();
          norm2 += vs * vs * f2 * f2 * src.rank1_weight.squaredNorm();
        } else if (kind[j] == Kind::kDiag) {
          norm2 += vs * vs * src.diag_weight.squaredNorm();
        } else {
          for (int k = 0; k < n_blocks; ++k)
            norm2 += vs * vs * src.coeff[k].squaredNorm();
        }
        const double scale = 1.0 / std::max(std::sqrt(norm2), 1e-300);
        cst[j] = scale * src.constant;
        u[j] = src.slack_coef;

        if (kind[j] == Kind::kRank1) {
          const int t = next_r1++;
          tidx[j] = t;
          factors.col(t) = src.rank1_factor;
          for (int k = 0; k < n_blocks; ++k)
            w1(t, k) = vs * scale * src.rank1_weight[k];
        } else if (kind[j] == Kind::kDiag) {
          const int t = next_rd++;
          tidx[j] = t;
          diag_n[t] = src.diag_index;
          for (int k = 0; k < n_blocks; ++k)
            wd(t, k) = vs * scale * src.diag_weight[k];
        } else {
          tidx[j] = static_cast<int>(gen.size());
          gen.emplace_back();
          auto& g = gen.back();
          g.resize(n_blocks);
          for (int k = 0; k < n_blocks; ++k) g[k] = (vs * scale) * src.coeff[k];
        }
      }

      // Internal cap row s <= kSlackCap keeps the objective bounded.
      cst[m - 1] = kSlackCap;
      u[m - 1] = -1.0;
      kind[m - 1] = Kind::kGeneric;
      tidx[m - 1] = -1;

      nu = static_cast<double>(m);
      for (int d : dims) nu += d;
    }

    static constexpr double kSlackCap = 100.0;
    bool is_cap(int j) const { return j == m - 1; }

    /// sum_k Re<A_jk, Y_k> for every row (cap row contributes 0).
    void row_values(const std::vector<CMat>& y, RVec& out) const {
      out.setZero(m);
      const int r1 = static_cast<int>(factors.cols());
      if (r1 > 0) {
        RVec acc = RVec::Zero(r1);
        for (int k = 0; k < n_blocks; ++k) {
          const CMat v = y[k] * factors;  // dim x R1
          for (int t = 0; t < r1; ++t)
            acc[t] += w1(t, k) * std::real(factors.col(t).dot(v.col(t)));
        }
        for (int j = 0; j < m - 1; ++j)
          if (kind[j] == Kind::kRank1) out[j] = acc[tidx[j]];
      }
      for (int j = 0; j < m - 1; ++j) {
        if (kind[j] == Kind::kDiag) {
          const int t = tidx[j];
          double v = 0.0;
          for (int k = 0; k < n_blocks; ++k)
            v += wd(t, k) * y[k](diag_n[t], diag_n[t]).real();
          out[j] = v;
        } else if (kind[j] == Kind::kGeneric && tidx[j] >= 0) {
          double v = 0.0;
          for (int k = 0; k < n_blocks; ++k)
            if (gen[tidx[j]][k].size() > 0) v += re_inner(gen[tidx[j]][k], y[k]);
          out[j] = v;
        }
      }
      for (int j = 0; j < m; ++j) out[j] += cst[j];
    }

    /// S_k = sum_j coef_j * A_jk (cap row has no coefficients).
    void weighted_sum(const RVec& coef, std::vector<CMat>& s_out) const {
      const int r1 = static_cast<int>(factors.cols());
      for (int k = 0; k < n_blocks; ++k) {
        CMat& s = s_out[k];
        s.resize(dims[k], dims[k]);
        if (r1 > 0) {
          RVec fw = RVec::Zero(r1);
          for (int j = 0; j < m - 1; ++j)
            if (kind[j] == Kind::kRank1) fw[tidx[j]] = coef[j] * w1(tidx[j], k);
          s.noalias() = factors * fw.asDiagonal() * factors.adjoint();
        } else {
          s.setZero();
        }
        for (int j = 0; j < m - 1; ++j) {
          if (kind[j] == Kind::kDiag) {
            const int t = tidx[j];
            s(diag_n[t], diag_n[t]) += coef[j] * wd(t, k);
          } else if (kind[j] == Kind::kGeneric && tidx[j] >= 0 &&
                     gen[tidx[j]][k].size() > 0) {
            s += coef[j] * gen[tidx[j]][k];
          }
        }
      }
    }

    /// q_j = sum_k Re<A_jk, T_k> over the m-1 non-cap rows.
    void inner_with(const std::vector<CMat>& t_mats, RVec& q) const {
      q.setZero(m - 1);
      const int r1 = static_cast<int>(factors.cols());
      if (r1 > 0) {
        RVec acc = RVec::Zero(r1);
        for (int k = 0; k < n_blocks; ++k) {
          const CMat v = t_mats[k] * factors;  // dim x R1
          for (int t = 0; t < r1; ++t)
            acc[t] += w1(t, k) * std::real(factors.col(t).dot(v.col(t)));
        }
        for (int j = 0; j < m - 1; ++j)
          if (kind[j] == Kind::kRank1) q[j] = acc[tidx[j]];
      }
      for (int j = 0; j < m - 1; ++j) {
        if (kind[j] == Kind::kDiag) {
          const int t = tidx[j];
          double v = 0.0;
          for (int k = 0; k < n_blocks; ++k)
            v += wd(t, k) * t_mats[k](diag_n[t], diag_n[t]).real();
          q[j] = v;
        } else if (kind[j] == Kind::kGeneric && tidx[j] >= 0) {
          double v = 0.0;
          for (int k = 0; k < n_blocks; ++k)
            if (gen[tidx[j]][k].size() > 0) v += re_inner(gen[tidx[j]][k], t_mats[k]);
          q[j] = v;
        }
      }
    }

    /// Gram(j,l) = sum_k <A_jk, Y_k A_lk Y_k> over non-cap rows.
    void build_gram(const std::vector<CMat>& y, RMat& gram) const {
      const int mm = m - 1;
      gram.setZero(mm, mm);
      const int r1 = static_cast<int>(factors.cols());
      const int rd = static_cast<int>(diag_n.size());

      std::vector<CMat> v(n_blocks), m1(n_blocks);
      for (int k = 0; k < n_blocks; ++k) {
        if (r1 > 0) {
          v[k].noalias() = y[k] * factors;             // dim x R1
          m1[k].noalias() = factors.adjoint() * v[k];  // R1 x R1
        }
      }

      // Map typed indices back to row indices.
      std::vector<int> row_of_r1(r1, -1), row_of_rd(rd, -1);
      for (int j = 0; j < mm; ++j) {
        if (kind[j] == Kind::kRank1) row_of_r1[tidx[j]] = j;
        if (kind[j] == Kind::kDiag) row_of_rd[tidx[j]] = j;
      }

      for (int k = 0; k < n_blocks; ++k) {
        // rank1 x rank1: w_j w_l |f_j^H Y f_l|^2
        for (int a = 0; a < r1; ++a) {
          const int ja = row_of_r1[a];
          for (int b = a; b < r1; ++b) {
            const int jb = row_of_r1[b];
            const double gv = w1(a, k) * w1(b, k) * std::norm(m1[k](a, b));
            gram(ja, jb) += gv;
            if (ja != jb) gram(jb, ja) += gv;
          }
        }
        // rank1 x diag: w_j wd_l |(Y f_j)_{n_l}|^2
        for (int a = 0; a < r1; ++a) {
          const int ja = row_of_r1[a];
          for (int b = 0; b < rd; ++b) {
            const int jb = row_of_rd[b];
            const double gv = w1(a, k) * wd(b, k) * std::norm(v[k](diag_n[b], a));
            gram(ja, jb) += gv;
            gram(jb, ja) += gv;
          }
        }
        // diag x diag: wd_j wd_l |Y(n_j, n_l)|^2
        for (int a = 0; a < rd; ++a) {
          const int ja = row_of_rd[a];
          for (int b = a; b < rd; ++b) {
            const int jb = row_of_rd[b];
            const double gv = wd(a, k) * wd(b, k) * std::norm(y[k](diag_n[a], diag_n[b]));
            gram(ja, jb) += gv;
            if (ja != jb) gram(jb, ja) += gv;
          }
        }
      }

      // Generic rows (rare): explicit sandwiches against everything.
      for (int j = 0; j < mm; ++j) {
        if (kind[j] != Kind::kGeneric || tidx[j] < 0) continue;
        std::vector<CMat> sand(n_blocks);
        for (int k = 0; k < n_blocks; ++k)
          if (gen[tidx[j]][k].size() > 0)
            sand[k] = y[k] * gen[tidx[j]][k] * y[k];
        for (int l = 0; l < mm; ++l) {
          double gv = 0.0;
          for (int k = 0; k < n_blocks; ++k) {
            if (sand[k].size() == 0) continue;
            if (kind[l] == Kind::kRank1) {
              const CVec f = factors.col(tidx[l]);
              gv += w1(tidx[l], k) * (f.adjoint() * sand[k] * f).value().real();
            } else if (kind[l] == Kind::kDiag) {
              gv += wd(tidx[l], k) * sand[k](diag_n[tidx[l]], diag_n[tidx[l]]).real();
            } else if (tidx[l] >= 0 && gen[tidx[l]][k].size() > 0) {
              gv += re_inner(gen[tidx[l]][k], sand[k]);
            }
          }
          gram(j, l) += (kind[l] == Kind::kGeneric) ? 0.5 * gv : gv;
          gram(l, j) += (kind[l] == Kind::kGeneric) ? 0.5 * gv : gv;
        }
      }
    }
  };

  ConicSolution run(const Workspace& ws, const ConicSolverOptions& opt) const {
    const int nb = ws.n_blocks;
    const int m = ws.m;

    // Strictly interior start: Y_k = y0 * I small enough for every
    // slack-free row, s below every slack row's margin.
    std::vector<CMat> y(nb);
    {
      RVec tr_coef(m);
      {
        // trace of each row's coefficient tuple = row value at Y = I.
        for (int k = 0; k < nb; ++k) y[k] = CMat::Identity(ws.dims[k], ws.dims[k]);
        RVec vals(m);
        ws.row_values(y, vals);
        for (int j = 0; j < m; ++j) tr_coef[j] = vals[j] - ws.cst[j];
      }
      double y0 = 0.5;
      for (int j = 0; j < m - 1; ++j) {
        if (ws.u[j] != 0.0) continue;
        if (tr_coef[j] >= 0.0 && ws.cst[j] <= 0.0)
          throw numerical_error("conic solver: slack-free row cannot be interior");
        if (tr_coef[j] < 0.0)
          y0 = std::min(y0, 0.5 * std::max(ws.cst[j], 0.0) / (-tr_coef[j]));
      }
      if (!(y0 > 0.0)) throw numerical_error("conic solver: no interior start");
      for (int k = 0; k < nb; ++k) y[k] *= y0;
    }

    RVec vals(m);
    ws.row_values(y, vals);
    double s = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      if (ws.u[j] != 0.0) s = std::min(s, vals[j] / (-ws.u[j]));
    s -= 1.0;

    ConicSolution sol;
    double eta = 1.0;
    int total_steps = 0;

    auto finish = [&](bool feasible, double s_est, double gap,
                      const std::string& status) {
      sol.feasible = feasible;
      sol.slack_star = s_est;
      sol.gap_bound = gap;
      sol.newton_steps = total_steps;
      sol.status = status;
      sol.blocks.resize(nb);
      for (int k = 0; k < nb; ++k) sol.blocks[k] = ws.vs * y[k];
      return sol;
    };

    auto barrier_value = [&](const std::vector<CMat>& yy, double ss, double et,
                             bool& ok) {
      ok = true;
      double f = -et * ss;
      RVec vv(m);
      ws.row_values(yy, vv);
      for (int j = 0; j < m; ++j) {
        const double slack = vv[j] + ws.u[j] * ss;
        if (!(slack > 0.0)) {
          ok = false;
          return 0.0;
        }
        f -= std::log(slack);
      }
      for (int k = 0; k < nb; ++k) {
        Eigen::LLT<CMat> llt(yy[k]);
        if (llt.info() != Eigen::Success) {
          ok = false;
          return 0.0;
        }
        for (int i = 0; i < yy[k].rows(); ++i)
          f -= 2.0 * std::log(llt.matrixLLT()(i, i).real());
      }
      return f;
    };

    std::vector<CMat> inv(nb), grad_y(nb), s_acc(nb), br(nb), dy(nb);
    for (int k = 0; k < nb; ++k) s_acc[k].resize(y[k].rows(), y[k].cols());
    RVec slack(m), coef(m), q(m - 1);

    while (true) {
      bool stalled = false;
      for (int inner = 0; inner < opt.max_newton_inner; ++inner) {
        if (++total_steps > opt.max_newton_total)
          throw numerical_error(
              "conic solver: Newton budget exhausted (eta=" + std::to_string(eta) +
              ", s=" + std::to_string(s) + ")");

        for (int k = 0; k < nb; ++k) {
          Eigen::LLT<CMat> llt(y[k]);
          if (llt.info() != Eigen::Success)
            throw numerical_error("conic solver: iterate left the PSD cone");
          inv[k] = llt.solve(CMat::Identity(y[k].rows(), y[k].cols()));
        }
        ws.row_values(y, vals);
        double margin = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j) {
          slack[j] = vals[j] + ws.u[j] * s;
          if (!ws.is_cap(j) && ws.u[j] != 0.0) margin = std::min(margin, vals[j]);
        }
        if (opt.early_exit && margin >= opt.feas_margin)
          return finish(true, margin, ws.nu / eta, "early-feasible");

        const double cap_var = slack[m - 1] * slack[m - 1];  // 1/w_cap

        // Gradient of eta*(-s) + barrier.
        double grad_s = -eta;
        for (int j = 0; j < m; ++j) {
          coef[j] = -1.0 / slack[j];
          grad_s -= ws.u[j] / slack[j];
        }
        ws.weighted_sum(coef, grad_y);
        for (int k = 0; k < nb; ++k) grad_y[k] -= inv[k];

        // Woodbury kernel K = diag(slack^2) + Gram + (u u^T) * cap_var.
        RMat kernel;
        ws.build_gram(y, kernel);
        for (int j = 0; j < m - 1; ++j) {
          for (int l = 0; l < m - 1; ++l) kernel(j, l) += ws.u[j] * ws.u[l] * cap_var;
          kernel(j, j) += slack[j] * slack[j];
        }
        Eigen::LDLT<RMat> kernel_ldlt(kernel);
        if (kernel_ldlt.info() != Eigen::Success)
          throw numerical_error("conic solver: Woodbury kernel factorization failed");

        // Newton direction for the full (Y, s) system.
        for (int k = 0; k < nb; ++k) br[k].noalias() = y[k] * (-grad_y[k]) * y[k];
        const double br_s = -grad_s * cap_var;
        ws.inner_with(br, q);
        for (int j = 0; j < m - 1; ++j) q[j] += ws.u[j] * br_s;
        const RVec beta = kernel_ldlt.solve(q);

        RVec beta_full = RVec::Zero(m);
        beta_full.head(m - 1) = beta;
        ws.weighted_sum(beta_full, s_acc);
        double ds = br_s;
        for (int j = 0; j < m - 1; ++j) ds -= beta[j] * ws.u[j] * cap_var;
        double decrement = -grad_s * ds;
        for (int k = 0; k < nb; ++k) {
          dy[k] = br[k] - y[k] * s_acc[k] * y[k];
          dy[k] = 0.5 * (dy[k] + dy[k].adjoint().eval());  // kill Hermitian drift
          decrement += re_inner(CMat(-grad_y[k]), dy[k]);
        }

        // Certified-enough infeasibility: near the central path the duality
        // gap is about nu/eta, so s* <= s + 2*nu/eta.
        if (opt.early_exit && decrement <= 0.25 &&
            s + 2.0 * ws.nu / eta < -opt.feas_margin)
          return finish(false, s + 2.0 * ws.nu / eta, ws.nu / eta, "early-infeasible");

        if (decrement <= opt.inner_decrement) break;
        if (!std::isfinite(decrement)) {
          stalled = true;
          break;
        }

        // Backtracking line search keeping the iterate strictly interior.
        bool ok = false;
        const double f0 = barrier_value(y, s, eta, ok);
        if (!ok) throw numerical_error("conic solver: current point not interior");
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
          std::vector<CMat> y_try(nb);
          for (int k = 0; k < nb; ++k) y_try[k] = y[k] + alpha * dy[k];
          const double s_try = s + alpha * ds;
          bool interior = false;
          const double f_try = barrier_value(y_try, s_try, eta, interior);
          if (interior && f_try <= f0 - 0.01 * alpha * decrement) {
            y = std::move(y_try);
            s = s_try;
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted) {
          stalled = true;  // floating-point floor; decide from what we have
          break;
        }
      }

      const double gap = ws.nu / eta;
      ws.row_values(y, vals);
      double margin = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j)
        if (!ws.is_cap(j) && ws.u[j] != 0.0) margin = std::min(margin, vals[j]);

      if (margin >= 0.0 && (stalled || opt.early_exit))
        return finish(true, margin, gap, "feasible-certificate");
      if (s + 2.0 * gap < -opt.feas_margin)
        return finish(false, s + 2.0 * gap, gap, "infeasible-bound");
      if (gap <= opt.gap_tol * std::max(1.0, std::abs(s)))
        return finish(s >= -opt.feas_margin, s, gap,
                      s >= -opt.feas_margin ? "converged-feasible"
                                            : "converged-infeasible");
      if (stalled) {
        // Progress floor without a certificate either way: the outcome is
        // decided by the sign of the best slack seen, within the deadband.
        return finish(s >= -opt.feas_margin, s, gap, "stalled");
      }
      eta *= opt.eta_growth;
    }
  }
};

/// Writes the feasibility problem in a plain text exchange format, one
/// constraint per record, so an external conic solver can be driven from the
/// same data:
///   blocks <G> <d_1> ... <d_G>
///   scale <variable_scale>
///   constraint <j> slack <u_j> constant <c_j>
///   block <k> followed by d_k lines of d_k "re im" pairs
inline void write_conic_problem(const ConicFeasibilityProblem& p, std::ostream& os) {
  os.precision(17);
  os << "blocks " << p.block_dims.size();
  for (int d : p.block_dims) os << ' ' << d;
  os << "\nscale " << p.variable_scale << '\n';
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    const auto& c = p.constraints[j];
    os << "constraint " << j << " slack " << c.slack_coef << " constant "
       << c.constant << '\n';
    for (std::size_t k = 0; k < c.coeff.size(); ++k) {
      os << "block " << k << '\n';
      const CMat& a = c.coeff[k];
      for (int r = 0; r < a.rows(); ++r) {
        for (int q = 0; q < a.cols(); ++q) {
          if (q) os << ' ';
          os << a(r, q).real() << ' ' << a(r, q).imag();
        }
        os << '\n';
      }
    }
  }
}

inline void write_conic_problem(const ConicFeasibilityProblem& p,
                                const std::string& path) {
  std::ofstream os(path);
  if (!os) throw config_error("write_conic_problem: cannot open " + path);
  write_conic_problem(p, os);
}

}  // namespace satprec

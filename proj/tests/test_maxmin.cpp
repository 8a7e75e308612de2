// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "satprec/maxmin.hpp"
#include "satprec/rng.hpp"
#include "satprec/sim.hpp"

using namespace satprec;

namespace {

CMat random_cmat(Rng& rng, int rows, int cols) {
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.cnormal();
  return m;
}

GroupSchedule singleton_schedule(int n) {
  GroupSchedule s;
  for (int i = 0; i < n; ++i) s.groups.push_back({i});
  s.users_per_group = 1;
  return s;
}

/// Orthogonal decoupled toy instance: h_1 = e_1, h_2 = e_2, unit targets,
/// unit noise, per-antenna budget p.
FairnessProblem orthogonal_problem(double p = 1.0) {
  FairnessProblem prob;
  prob.h = CMat::Identity(2, 2);
  prob.sched = singleton_schedule(2);
  prob.gamma = RVec::Ones(2);
  prob.sigma2 = RVec::Ones(2);
  prob.budget_w = RVec::Constant(2, p);
  return prob;
}

FairnessProblem random_problem(Rng& rng, int nt, int rho, double p = 2.0) {
  FairnessProblem prob;
  prob.h = random_cmat(rng, nt * rho, nt);
  GroupSchedule sched;
  sched.users_per_group = rho;
  for (int k = 0; k < nt; ++k) {
    std::vector<int> grp;
    for (int i = 0; i < rho; ++i) grp.push_back(i * nt + k);
    sched.groups.push_back(grp);
  }
  prob.sched = sched;
  prob.gamma = RVec::Ones(nt * rho);
  prob.sigma2 = RVec::Ones(nt * rho);
  prob.budget_w = RVec::Constant(nt, p);
  return prob;
}

void check_iterate(const SdrIterate& it, const FairnessProblem& prob) {
  RVec diag_sum = RVec::Zero(prob.n_antennas());
  for (const CMat& x : it.x) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(x);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
    diag_sum += x.diagonal().real();
  }
  for (int n = 0; n < prob.n_antennas(); ++n)
    CHECK(diag_sum[n] <= prob.budget_w[n] + 1e-9);
}

struct AlwaysFeasibleSolver final : SdrSolver {
  ConicSolution maximize_slack(const ConicFeasibilityProblem& p,
                               const ConicSolverOptions&) const override {
    ConicSolution s;
    s.feasible = true;
    s.slack_star = 1.0;
    for (int d : p.block_dims) s.blocks.push_back(1e-6 * CMat::Identity(d, d));
    s.status = "mock";
    return s;
  }
};

}  // namespace

TEST_CASE("sdr feasibility at t = 0 always holds") {
  Rng rng(11);
  const auto prob = random_problem(rng, 3, 2);
  const auto res = sdr_feasibility(prob, 0.0);
  CHECK(res.feasible);
  check_iterate(res.iterate, prob);
}

TEST_CASE("orthogonal instance: feasible at its optimum, infeasible above") {
  const auto prob = orthogonal_problem();
  // At t = 1 the decoupled certificate X_k = e_k e_k^H is feasible; the
  // relaxation cannot do better because X_1[0,0] <= P_1 = 1 and sigma^2 = 1.
  const auto at1 = sdr_feasibility(prob, 1.0 - 1e-9);
  CHECK(at1.feasible);
  check_iterate(at1.iterate, prob);
  const auto at3 = sdr_feasibility(prob, 3.0);
  CHECK(!at3.feasible);
}

TEST_CASE("bisection finds the decoupled optimum and scales with power") {
  MaxminConfig cfg;
  std::vector<BisectionStep> trace;
  int solves = 0;

  const auto prob1 = orthogonal_problem(1.0);
  const auto r1 = bisect_fairness(prob1, 0.0, interference_free_bound(prob1) * 1.01,
                                  cfg.eps_bisect, cfg, trace, solves);
  CHECK(r1.t_feasible == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(r1.t_upper >= r1.t_feasible);

  trace.clear();
  const auto prob2 = orthogonal_problem(2.0);
  const auto r2 = bisect_fairness(prob2, 0.0, interference_free_bound(prob2) * 1.01,
                                  cfg.eps_bisect, cfg, trace, solves);
  CHECK(r2.t_feasible == doctest::Approx(2.0).epsilon(2e-3));

  // Monotone trace: every feasible level sits below every infeasible one.
  double max_feas = 0.0, min_infeas = std::numeric_limits<double>::infinity();
  for (const auto& s : trace) {
    if (s.feasible) max_feas = std::max(max_feas, s.t);
    else min_infeas = std::min(min_infeas, s.t);
  }
  CHECK(max_feas <= min_infeas);
}

TEST_CASE("bisection errors out when the upper bound never turns infeasible") {
  MaxminConfig cfg;
  cfg.solver = std::make_shared<AlwaysFeasibleSolver>();
  auto prob = orthogonal_problem();
  std::vector<BisectionStep> trace;
  int solves = 0;
  CHECK_THROWS_AS(bisect_fairness(prob, 0.0, 1.0, 1e-3, cfg, trace, solves),
                  numerical_error);
}

TEST_CASE("gaussian randomization: eigen candidate, counting, determinism") {
  Rng rng(13);
  const auto prob = random_problem(rng, 3, 1);

  // Rank-one blocks: candidate 0 is the scaled dominant eigenvector.
  SdrIterate it;
  std::vector<CVec> us;
  for (int k = 0; k < 3; ++k) {
    CVec u = random_cmat(rng, 3, 1);
    us.push_back(u);
    it.x.push_back(u * u.adjoint());
  }
  const auto cands = gaussian_randomize(it, prob, 50, 7);
  CHECK(cands.size() == 51);  // 50 draws + eigen candidate
  for (int k = 0; k < 3; ++k) {
    const CVec c = cands[0].col(k);
    // Colinear up to a global phase: |u^H c| = ||u|| ||c||.
    CHECK(std::abs(us[k].dot(c)) ==
          doctest::Approx(us[k].norm() * c.norm()).epsilon(1e-9));
    CHECK(c.norm() == doctest::Approx(us[k].norm()).epsilon(1e-9));
  }

  // Higher-rank blocks: exactly N_rand candidates, reproducible by seed.
  SdrIterate it2;
  for (int k = 0; k < 3; ++k) {
    const CMat a = random_cmat(rng, 3, 3);
    it2.x.push_back(a * a.adjoint());
  }
  const auto c1 = gaussian_randomize(it2, prob, 50, 7);
  const auto c2 = gaussian_randomize(it2, prob, 50, 7);
  const auto c3 = gaussian_randomize(it2, prob, 50, 8);
  CHECK(c1.size() == 50);
  CHECK((c1[17] - c2[17]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((c1[17] - c3[17]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("gaussian randomization second moment reproduces X") {
  Rng rng(17);
  const auto prob = random_problem(rng, 3, 1);
  SdrIterate it;
  const CMat a = random_cmat(rng, 3, 3);
  it.x.push_back(a * a.adjoint());
  it.x.push_back(CMat::Identity(3, 3));
  it.x.push_back(CMat::Identity(3, 3));

  const int n_draws = 100000;
  const auto cands = gaussian_randomize(it, prob, n_draws, 3);
  CMat acc = CMat::Zero(3, 3);
  for (const auto& w : cands) acc += w.col(0) * w.col(0).adjoint();
  acc /= static_cast<double>(cands.size());
  CHECK((acc - it.x[0]).norm() / it.x[0].norm() < 0.02);
}

TEST_CASE("fixed-direction power control on the decoupled instance") {
  const auto prob = orthogonal_problem();
  const std::vector<CMat> cands = {CMat::Identity(2, 2)};
  const auto pc = power_control_fixed_directions(cands, prob);
  CHECK(pc.t_achieved == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(!pc.degenerate);
  const RVec p = per_antenna_power(pc.w);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-9));  // q = p at the optimum
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("power control flags directions that cannot serve a user") {
  auto prob = orthogonal_problem();
  CMat bad(2, 2);
  bad << cxd(0, 0), cxd(1, 0), cxd(0, 0), cxd(1, 0);  // both columns on e_2
  // Column 0 has zero gain toward user 0, so t stays 0 and the result is
  // flagged degenerate.
  const auto pc = power_control_fixed_directions({bad}, prob);
  CHECK(pc.t_achieved == 0.0);
  CHECK(pc.degenerate);
}

TEST_CASE("power control is equivariant in the targets") {
  Rng rng(19);
  const auto base = random_problem(rng, 2, 2);
  std::vector<CMat> cands;
  for (int c = 0; c < 6; ++c) cands.push_back(random_cmat(rng, 2, 2));

  auto scaled = base;
  scaled.gamma *= 2.0;
  const auto pc1 = power_control_fixed_directions(cands, base);
  const auto pc2 = power_control_fixed_directions(cands, scaled);
  CHECK(pc2.t_achieved == doctest::Approx(pc1.t_achieved / 2.0).epsilon(1e-6));
  CHECK(pc1.best_index == pc2.best_index);
}

TEST_CASE("solve_maxmin_fair on the decoupled instance") {
  const auto prob = orthogonal_problem();
  MaxminConfig cfg;
  cfg.seed = 21;
  const auto rep = solve_maxmin_fair(prob, cfg);

  CHECK(rep.t_achieved == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.t_achieved <= rep.t_sdr_bound + 1e-6);
  // Tight rank-one case: certified bound within 1e-4.
  REQUIRE(rep.ranks.size() == 2);
  CHECK(rep.ranks[0] == 1);
  CHECK(rep.ranks[1] == 1);
  CHECK(rep.t_sdr_bound - rep.t_achieved <= 1e-4);

  // W is diagonal up to a per-column phase.
  CHECK(std::abs(rep.w(0, 1)) < 1e-3);
  CHECK(std::abs(rep.w(1, 0)) < 1e-3);
  CHECK(std::abs(rep.w(0, 0)) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(rep.w(1, 1)) == doctest::Approx(1.0).epsilon(1e-3));

  // Doubling the budget doubles the optimum.
  const auto rep2 = solve_maxmin_fair(orthogonal_problem(2.0), cfg);
  CHECK(rep2.t_achieved == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("solve_maxmin_fair halves t when all targets double") {
  Rng rng(23);
  const auto base = random_problem(rng, 2, 2);
  auto doubled = base;
  doubled.gamma *= 2.0;

  MaxminConfig cfg;
  cfg.seed = 5;
  const auto r1 = solve_maxmin_fair(base, cfg);
  const auto r2 = solve_maxmin_fair(doubled, cfg);
  CHECK(r2.t_achieved == doctest::Approx(r1.t_achieved / 2.0).epsilon(1e-6));
  CHECK((r1.w - r2.w).cwiseAbs().maxCoeff() < 1e-6 * r1.w.cwiseAbs().maxCoeff());
}

TEST_CASE("solve_maxmin_fair matches the brute-force search at toy scale") {
  int within = 0;
  const int n_seeds = 5;
  for (int seed = 0; seed < n_seeds; ++seed) {
    Rng rng(100 + seed);
    const auto prob = random_problem(rng, 2, (seed % 2) + 1);
    MaxminConfig cfg;
    cfg.seed = seed;
    const auto rep = solve_maxmin_fair(prob, cfg);
    const double bf = oracles::brute_force_maxmin(prob);
    if (std::abs(rep.t_achieved - bf) <= 0.02 * bf) ++within;
  }
  CHECK(within >= n_seeds - 1);
}

TEST_CASE("maxmin dominates rescaled MMSE on the minimum SINR") {
  // Statistical form of the paper's ordering, at the SINR level.
  double sum_maxmin = 0.0, sum_mmse = 0.0;
  const int n_inst = 100;
  for (int seed = 0; seed < n_inst; ++seed) {
    Rng rng(300 + seed);
    const auto prob = random_problem(rng, 2, 2, 4.0);
    MaxminConfig cfg;
    cfg.seed = seed;
    cfg.n_rand = 50;
    const auto rep = solve_maxmin_fair(prob, cfg);
    sum_maxmin += rep.t_achieved;

    PowerBudget budget;
    budget.per_antenna_w = prob.budget_w;
    const CMat w = detail::mmse_rescaled_precoder(prob.h, prob.sched, budget);
    sum_mmse += sinr(prob.h, w, prob.sched, prob.sigma2).minCoeff();

    const RVec pw = per_antenna_power(rep.w);
    for (int n = 0; n < prob.n_antennas(); ++n)
      CHECK(pw[n] <= prob.budget_w[n] + 1e-9);
  }
  CHECK(sum_maxmin / n_inst >= sum_mmse / n_inst);
}

TEST_CASE("structured and generic solver paths agree") {
  // The interior-point solver has a fast path for rank-one/diagonal rows;
  // stripping the hints must not change the outcome.
  Rng rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const auto prob = random_problem(rng, 3, 2);
    const double t = 0.2 + 0.4 * trial;
    auto data = build_sdr_problem(prob, t);
    auto stripped = data;
    for (auto& c : stripped.constraints) {
      c.rank1_factor.resize(0);
      c.rank1_weight.resize(0);
      c.diag_index = -1;
      c.diag_weight.resize(0);
    }
    InteriorPointSdrSolver solver;
    ConicSolverOptions opt;
    opt.early_exit = false;
    const auto a = solver.maximize_slack(data, opt);
    const auto b = solver.maximize_slack(stripped, opt);
    CHECK(a.feasible == b.feasible);
    CHECK(a.slack_star == doctest::Approx(b.slack_star).epsilon(1e-4));
  }
}

TEST_CASE("solver report serializes the trace and precoder") {
  const auto rep = solve_maxmin_fair(orthogonal_problem(), MaxminConfig{});
  std::stringstream ss;
  write_solver_report(rep, ss);
  const std::string text = ss.str();
  CHECK(text.find("step,0,") != std::string::npos);
  CHECK(text.find("t_achieved,") != std::string::npos);
  CHECK(text.find("precoder") != std::string::npos);

  // The conic subproblem exchange format is writable as well.
  std::stringstream ps;
  write_conic_problem(build_sdr_problem(orthogonal_problem(), 0.5), ps);
  CHECK(ps.str().find("blocks 2 2 2") != std::string::npos);
}

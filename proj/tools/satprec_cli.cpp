// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satprec/csv.hpp"
#include "satprec/maxmin.hpp"
#include "satprec/sim.hpp"

namespace {

using namespace satprec;

struct CommonOpts {
  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int n_runs = 0;
  std::vector<std::string> strategies;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_out = true) {
  cmd->add_option("-c,--config", o.config_path, "Path to the JSON config file");
  if (with_out) cmd->add_option("-o,--out", o.output_dir, "Output directory override");
  cmd->add_option("-s,--seed", o.seed, "Master seed override")
      ->each([&](const std::string&) { o.seed_set = true; });
  cmd->add_option("-n,--runs", o.n_runs, "Monte Carlo run count override");
  cmd->add_option("--strategies", o.strategies,
                  "Strategy subset (four_color, mmse_rescaled, maxmin_fair)")
      ->delimiter(',');
}

SimConfig load(const CommonOpts& o) {
  SimConfig cfg = o.config_path.empty() ? default_sim_config() : load_sim_config(o.config_path);
  if (o.seed_set) cfg.seed = o.seed;
  if (o.n_runs > 0) cfg.n_runs = o.n_runs;
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (!o.strategies.empty()) {
    cfg.strategies.clear();
    for (const auto& s : o.strategies) cfg.strategies.push_back(strategy_from_name(s));
  }
  cfg.raw = sim_config_to_json(cfg);
  cfg.validate();
  return cfg;
}

void print_summary(const SweepResult& result) {
  std::cout << result.axis_name << "  strategy        mean_bps      unavail%  ok/failed\n";
  for (const auto& s : result.summarize()) {
    std::printf("%-9.4g %-15s %-13.6g %-9.3f %d/%d\n", s.axis,
                strategy_name(s.strategy).c_str(), s.mean_bps, s.unavailability_pct,
                s.n_ok, s.n_failed);
  }
}

int run_sweep_cmd(const CommonOpts& opts, bool power_axis) {
  const SimConfig cfg = load(opts);
  const SweepResult result = power_axis ? run_power_sweep(cfg) : run_rho_sweep(cfg);
  const auto files = emit_reports(result, cfg.output_dir, cfg);
  print_summary(result);
  std::cout << "wrote " << files.size() << " files to " << cfg.output_dir << "\n";
  return 0;
}

int solve_one_cmd(const CommonOpts& opts, int rho, double power_dbw) {
  SimConfig cfg = load(opts);
  if (rho > 0) cfg.rho_list = {rho};
  if (power_dbw > 0.0) cfg.link_budget.p_tot_dbw = power_dbw;

  const std::uint64_t chan_seed = derive_seed(cfg.seed, seed_tag::kChannel, 0, 0);
  const UserDrop drop = drop_users(cfg.pattern, cfg.rho_list.front(), chan_seed);
  const RMat b = link_budget_matrix(drop, cfg.pattern, cfg.link_budget);
  const ChannelMatrix ch = apply_phases(b, chan_seed);
  const GroupSchedule sched = group_by_strongest_gain(drop, cfg.pattern);
  const PowerBudget budget = PowerBudget::uniform(cfg.link_budget.available_power_w(),
                                                  cfg.pattern.n_beams());

  const auto prob = FairnessProblem::make(ch.h, sched, budget);
  const SolverReport rep =
      solve_maxmin_fair(prob, cfg.solver.to_maxmin(derive_seed(cfg.seed, seed_tag::kSolver, 0, 0)));

  std::cout << "t_achieved        = " << rep.t_achieved << "  ("
            << lin_to_db(rep.t_achieved) << " dB)\n";
  std::cout << "t_sdr_bound       = " << rep.t_sdr_bound << '\n';
  std::cout << "bisection steps   = " << rep.bisection_trace.size() << '\n';
  std::cout << "randomizations    = " << rep.n_randomizations << '\n';
  std::cout << "ranks             =";
  for (int r : rep.ranks) std::cout << ' ' << r;
  std::cout << '\n';
  if (rep.degenerate) std::cout << "warning: degenerate randomization (t = 0)\n";

  std::filesystem::create_directories(cfg.output_dir);
  const std::string report_path = cfg.output_dir + "/solver_report.txt";
  write_solver_report(rep, report_path);
  write_complex_matrix_csv(rep.w, cfg.output_dir + "/precoder.csv");
  std::cout << "wrote " << report_path << " and precoder.csv\n";
  return 0;
}

int gen_channel_cmd(const CommonOpts& opts, int rho, const std::string& out_file,
                    bool magnitudes) {
  SimConfig cfg = load(opts);
  if (rho > 0) cfg.rho_list = {rho};
  const std::uint64_t chan_seed = derive_seed(cfg.seed, seed_tag::kChannel, 0, 0);
  const UserDrop drop = drop_users(cfg.pattern, cfg.rho_list.front(), chan_seed);
  const RMat b = link_budget_matrix(drop, cfg.pattern, cfg.link_budget);
  const ChannelMatrix ch = apply_phases(b, chan_seed);
  write_complex_matrix_csv(magnitudes ? CMat(b.cast<cxd>()) : ch.h, out_file);
  std::cout << "wrote " << ch.h.rows() << "x" << ch.h.cols() << " channel to "
            << out_file << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame-based multigroup multicast precoding simulator for multibeam satellites"};
  app.require_subcommand(1);

  CommonOpts power_opts, rho_opts, solve_opts, gen_opts;
  int solve_rho = 0, gen_rho = 0;
  double solve_power = 0.0;
  std::string gen_out = "channel.csv";
  bool gen_magnitudes = false;

  auto* power = app.add_subcommand("power-sweep", "Per-beam throughput vs on-board power");
  add_common(power, power_opts);
  auto* rho = app.add_subcommand("rho-sweep", "Per-beam throughput vs users per frame");
  add_common(rho, rho_opts);
  auto* solve = app.add_subcommand("solve-one", "Solve one max-min fair instance and print the report");
  add_common(solve, solve_opts);
  solve->add_option("--rho", solve_rho, "Users per frame for the instance");
  solve->add_option("--power", solve_power, "On-board power in dBW for the instance");
  auto* gen = app.add_subcommand("gen-channel", "Export one channel realization as CSV");
  add_common(gen, gen_opts, /*with_out=*/false);
  gen->add_option("--rho", gen_rho, "Users per frame");
  gen->add_option("--file", gen_out, "Output CSV path");
  gen->add_flag("--magnitudes", gen_magnitudes, "Export B (magnitudes) instead of H");

  CLI11_PARSE(app, argc, argv);

  try {
    if (power->parsed()) return run_sweep_cmd(power_opts, true);
    if (rho->parsed()) return run_sweep_cmd(rho_opts, false);
    if (solve->parsed()) return solve_one_cmd(solve_opts, solve_rho, solve_power);
    if (gen->parsed()) return gen_channel_cmd(gen_opts, gen_rho, gen_out, gen_magnitudes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

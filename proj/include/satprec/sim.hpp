// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "satprec/acm.hpp"
#include "satprec/channel.hpp"
#include "satprec/csv.hpp"
#include "satprec/maxmin.hpp"
#include "satprec/precoding.hpp"

namespace satprec {

enum class Strategy { kFourColor, kMmseRescaled, kMaxminFair };

inline std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kFourColor: return "four_color";
    case Strategy::kMmseRescaled: return "mmse_rescaled";
    case Strategy::kMaxminFair: return "maxmin_fair";
  }
  throw config_error("unknown strategy");
}

inline Strategy strategy_from_name(const std::string& name) {
  if (name == "four_color") return Strategy::kFourColor;
  if (name == "mmse_rescaled") return Strategy::kMmseRescaled;
  if (name == "maxmin_fair") return Strategy::kMaxminFair;
  throw config_error("unknown strategy '" + name +
                     "' (expected four_color, mmse_rescaled or maxmin_fair)");
}

struct SolverSettings {
  double eps_bisect = 1e-3;
  double conic_tol = 1e-7;
  int n_rand = 100;
  int max_bisect_steps = 64;
  bool rank1_refine = true;
  std::shared_ptr<SdrSolver> backend;  // not serialized; default interior point

  MaxminConfig to_maxmin(std::uint64_t seed) const {
    MaxminConfig cfg;
    cfg.eps_bisect = eps_bisect;
    cfg.conic_tol = conic_tol;
    cfg.n_rand = n_rand;
    cfg.max_bisect_steps = max_bisect_steps;
    cfg.rank1_refine = rank1_refine;
    cfg.solver = backend;
    cfg.seed = seed;
    return cfg;
  }
};

struct SimConfig {
  LinkBudgetParams link_budget;
  BeamPattern pattern;
  std::vector<int> coloring;
  std::vector<int> rho_list = {2};
  std::vector<double> power_sweep_dbw = {55.0};
  std::vector<Strategy> strategies = {Strategy::kFourColor, Strategy::kMmseRescaled,
                                      Strategy::kMaxminFair};
  int n_runs = 500;
  std::uint64_t seed = 1;
  SolverSettings solver;
  ModcodTable modcod = ModcodTable::dvbs2_default();
  std::string output_dir = "out";
  nlohmann::json raw;  // parsed config, for the manifest hash

  void validate() const {
    link_budget.validate();
    pattern.validate();
    if (static_cast<int>(coloring.size()) != pattern.n_beams())
      throw config_error("config: coloring must assign one color per beam");
    if (rho_list.empty()) throw config_error("config: rho_list must be nonempty");
    for (int r : rho_list)
      if (r < 1) throw config_error("config: rho values must be >= 1");
    if (power_sweep_dbw.empty())
      throw config_error("config: power_sweep_dBW must be nonempty");
    if (strategies.empty()) throw config_error("config: strategies must be nonempty");
    if (n_runs < 1) throw config_error("config: n_runs must be >= 1");
    modcod.validate();
  }
};

/// Default 9-beam scenario mirroring the Table I link budget: hexagonal
/// cluster, -3.5 dB crossover at the footprint edge, DVB-S2 envelope.
inline SimConfig default_sim_config() {
  SimConfig cfg;
  cfg.pattern = BeamPattern::hex9(/*spacing_m=*/290e3, /*beamwidth_3db_deg=*/0.215,
                                  /*boresight_gain_dbi=*/52.0,
                                  /*sidelobe_floor_db=*/-30.0);
  cfg.coloring = hex9_four_coloring();
  return cfg;
}

inline nlohmann::json sim_config_to_json(const SimConfig& c) {
  nlohmann::json j;
  j["link_budget"] = {{"frequency_Hz", c.link_budget.frequency_hz},
                      {"T_cs_K", c.link_budget.t_cs_k},
                      {"W_bw_Hz", c.link_budget.w_bw_hz},
                      {"G_R_dBi", c.link_budget.g_r_dbi},
                      {"P_tot_dBW", c.link_budget.p_tot_dbw},
                      {"OBO_dB", c.link_budget.obo_db},
                      {"alpha", c.link_budget.alpha}};
  nlohmann::json centers = nlohmann::json::array();
  for (const auto& b : c.pattern.centers_m)
    centers.push_back({b.x() / 1e3, b.y() / 1e3});
  j["beams"] = {{"centers_km", centers},
                {"beamwidth_3dB_deg", c.pattern.beamwidth_3db_deg},
                {"boresight_gain_dBi", c.pattern.boresight_gain_dbi},
                {"sidelobe_floor_dB", c.pattern.sidelobe_floor_db},
                {"taper", c.pattern.taper == Taper::kGaussian ? "gaussian" : "bessel-taper"},
                {"footprint_radius_km", c.pattern.footprint_radius_m / 1e3},
                {"satellite_height_km", c.pattern.satellite_height_m / 1e3},
                {"coloring", c.coloring}};
  std::vector<std::string> strat;
  for (Strategy s : c.strategies) strat.push_back(strategy_name(s));
  j["sim"] = {{"rho_list", c.rho_list},
              {"power_sweep_dBW", c.power_sweep_dbw},
              {"strategies", strat},
              {"n_runs", c.n_runs},
              {"seed", c.seed},
              {"modcod_table", c.modcod.name},
              {"output_dir", c.output_dir}};
  j["solver"] = {{"eps_bisect", c.solver.eps_bisect},
                 {"conic_tol", c.solver.conic_tol},
                 {"n_rand", c.solver.n_rand},
                 {"max_bisect_steps", c.solver.max_bisect_steps},
                 {"rank1_refine", c.solver.rank1_refine}};
  return j;
}

inline SimConfig sim_config_from_json(const nlohmann::json& j) {
  SimConfig cfg = default_sim_config();
  try {
    if (j.contains("link_budget")) {
      const auto& lb = j.at("link_budget");
      auto& p = cfg.link_budget;
      if (lb.contains("frequency_Hz")) p.frequency_hz = lb.at("frequency_Hz");
      if (lb.contains("T_cs_K")) p.t_cs_k = lb.at("T_cs_K");
      if (lb.contains("W_bw_Hz")) p.w_bw_hz = lb.at("W_bw_Hz");
      if (lb.contains("G_R_dBi")) p.g_r_dbi = lb.at("G_R_dBi");
      if (lb.contains("P_tot_dBW")) p.p_tot_dbw = lb.at("P_tot_dBW");
      if (lb.contains("OBO_dB")) p.obo_db = lb.at("OBO_dB");
      if (lb.contains("alpha")) p.alpha = lb.at("alpha");
    }
    if (j.contains("beams")) {
      const auto& b = j.at("beams");
      BeamPattern& pat = cfg.pattern;
      const double spacing_km = b.value("spacing_km", 290.0);
      if (b.contains("centers_km")) {
        pat.centers_m.clear();
        for (const auto& c : b.at("centers_km"))
          pat.centers_m.emplace_back(double(c.at(0)) * 1e3, double(c.at(1)) * 1e3);
        pat.footprint_radius_m = spacing_km * 1e3 / 2.0;
        cfg.coloring.clear();
      } else if (b.value("layout", "hex9") == "hex9") {
        pat = BeamPattern::hex9(spacing_km * 1e3, pat.beamwidth_3db_deg,
                                pat.boresight_gain_dbi, pat.sidelobe_floor_db,
                                pat.satellite_height_m);
        cfg.coloring = hex9_four_coloring();
      } else {
        throw config_error("config: beams.layout must be hex9 or centers_km given");
      }
      if (b.contains("beamwidth_3dB_deg")) pat.beamwidth_3db_deg = b.at("beamwidth_3dB_deg");
      if (b.contains("boresight_gain_dBi")) pat.boresight_gain_dbi = b.at("boresight_gain_dBi");
      if (b.contains("sidelobe_floor_dB")) pat.sidelobe_floor_db = b.at("sidelobe_floor_dB");
      if (b.contains("satellite_height_km"))
        pat.satellite_height_m = double(b.at("satellite_height_km")) * 1e3;
      if (b.contains("footprint_radius_km"))
        pat.footprint_radius_m = double(b.at("footprint_radius_km")) * 1e3;
      if (b.contains("taper")) {
        const std::string t = b.at("taper");
        if (t == "gaussian") pat.taper = Taper::kGaussian;
        else if (t == "bessel-taper") pat.taper = Taper::kBesselTaper;
        else throw config_error("config: taper must be gaussian or bessel-taper");
      }
      if (b.contains("coloring"))
        cfg.coloring = b.at("coloring").get<std::vector<int>>();
    }
    if (j.contains("sim")) {
      const auto& s = j.at("sim");
      if (s.contains("rho_list")) cfg.rho_list = s.at("rho_list").get<std::vector<int>>();
      if (s.contains("power_sweep_dBW"))
        cfg.power_sweep_dbw = s.at("power_sweep_dBW").get<std::vector<double>>();
      if (s.contains("strategies")) {
        cfg.strategies.clear();
        for (const auto& name : s.at("strategies"))
          cfg.strategies.push_back(strategy_from_name(name));
      }
      if (s.contains("n_runs")) cfg.n_runs = s.at("n_runs");
      if (s.contains("seed")) cfg.seed = s.at("seed").get<std::uint64_t>();
      if (s.contains("output_dir")) cfg.output_dir = s.at("output_dir");
      if (s.contains("modcod_table")) {
        const std::string m = s.at("modcod_table");
        cfg.modcod = (m == "dvbs2_default") ? ModcodTable::dvbs2_default()
                                            : ModcodTable::load(m);
      }
    }
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      if (s.contains("eps_bisect")) cfg.solver.eps_bisect = s.at("eps_bisect");
      if (s.contains("conic_tol")) cfg.solver.conic_tol = s.at("conic_tol");
      if (s.contains("n_rand")) cfg.solver.n_rand = s.at("n_rand");
      if (s.contains("max_bisect_steps")) cfg.solver.max_bisect_steps = s.at("max_bisect_steps");
      if (s.contains("rank1_refine")) cfg.solver.rank1_refine = s.at("rank1_refine");
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: malformed JSON value: ") + e.what());
  }
  cfg.raw = sim_config_to_json(cfg);
  cfg.validate();
  return cfg;
}

inline SimConfig load_sim_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("config: cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config: parse error in " + path + ": " + e.what());
  }
  return sim_config_from_json(j);
}

/// Hash of the canonical config serialization (keys are emitted sorted, so
/// the hash changes iff the effective configuration changes).
inline std::string config_hash(const SimConfig& cfg) {
  const std::string dump = cfg.raw.is_null() ? sim_config_to_json(cfg).dump()
                                             : cfg.raw.dump();
  return hex64(fnv1a64(dump.data(), dump.size()));
}

/// One (axis value, strategy, run) outcome.
struct RunRecord {
  double axis = 0.0;
  Strategy strategy = Strategy::kFourColor;
  int run = 0;
  std::uint64_t chan_seed = 0;
  std::uint64_t channel_hash = 0;  // same for every strategy of a run
  bool failed = false;
  double t_achieved = std::numeric_limits<double>::quiet_NaN();
  RVec per_beam_bps;
  RVec per_user_rate_bps;
  RVec per_user_sinr_db;
  std::vector<bool> unavailable;
};

struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  int n_runs = 0;
  std::vector<Strategy> strategies;
  std::vector<RunRecord> records;

  struct Summary {
    double axis = 0.0;
    Strategy strategy = Strategy::kFourColor;
    RVec mean_per_beam_bps;
    double mean_bps = 0.0;
    double unavailability_pct = 0.0;
    int n_ok = 0;
    int n_failed = 0;
  };

  /// Failed runs are excluded from the means and reported explicitly.
  std::vector<Summary> summarize() const {
    std::vector<Summary> out;
    for (double axis : axis_values) {
      for (Strategy s : strategies) {
        Summary sum;
        sum.axis = axis;
        sum.strategy = s;
        long users = 0, unav = 0;
        for (const auto& rec : records) {
          if (rec.axis != axis || rec.strategy != s) continue;
          if (rec.failed) {
            ++sum.n_failed;
            continue;
          }
          if (sum.n_ok == 0) sum.mean_per_beam_bps = RVec::Zero(rec.per_beam_bps.size());
          sum.mean_per_beam_bps += rec.per_beam_bps;
          ++sum.n_ok;
          for (std::size_t i = 0; i < rec.unavailable.size(); ++i) {
            ++users;
            if (rec.unavailable[i]) ++unav;
          }
        }
        if (sum.n_ok > 0) {
          sum.mean_per_beam_bps /= sum.n_ok;
          sum.mean_bps = sum.mean_per_beam_bps.mean();
          sum.unavailability_pct = 100.0 * double(unav) / double(std::max<long>(users, 1));
        }
        out.push_back(std::move(sum));
      }
    }
    return out;
  }
};

namespace detail {

/// MMSE-rescaled strategy: closed-form precoder with beta = sigma^2 * N_t /
/// sum_n P_n, scaled to the total available power (the closed form fixes
/// only the direction), then clamped row-wise to the per-antenna limits.
inline CMat mmse_rescaled_precoder(const CMat& h, const GroupSchedule& sched,
                                   const PowerBudget& budget, double sigma2 = 1.0) {
  const auto slices = slice_equivalent_channels(h, sched);
  const double beta = sigma2 * static_cast<double>(h.cols()) / budget.total_w();
  CMat w = mmse_precoder(slices, beta);
  const double p = total_power(w);
  if (p > 0.0) w *= std::sqrt(budget.total_w() / p);
  return rescale_to_pac(w, budget);
}

struct StrategyOutcome {
  RateInputs inputs;
  double t_achieved = std::numeric_limits<double>::quiet_NaN();
};

inline StrategyOutcome evaluate_strategy(Strategy strategy, const ChannelMatrix& ch,
                                         const GroupSchedule& sched,
                                         const PowerBudget& budget,
                                         const std::vector<int>& coloring,
                                         const SolverSettings& solver,
                                         std::uint64_t solver_seed) {
  StrategyOutcome out;
  switch (strategy) {
    case Strategy::kFourColor:
      out.inputs = four_color_baseline(ch.h, sched, budget, coloring);
      break;
    case Strategy::kMmseRescaled: {
      const CMat w = mmse_rescaled_precoder(ch.h, sched, budget);
      out.inputs.sinr_linear = sinr(ch.h, w, sched);
      out.inputs.bandwidth_fraction = 1.0;
      break;
    }
    case Strategy::kMaxminFair: {
      const auto prob = FairnessProblem::make(ch.h, sched,
                                              PowerBudget{budget.per_antenna_w});
      const SolverReport rep = solve_maxmin_fair(prob, solver.to_maxmin(solver_seed));
      out.inputs.sinr_linear = sinr(ch.h, rep.w, sched);
      out.inputs.bandwidth_fraction = 1.0;
      out.t_achieved = rep.t_achieved;
      break;
    }
  }
  return out;
}

inline SweepResult run_sweep(const SimConfig& cfg, bool power_axis) {
  cfg.validate();
  SweepResult result;
  result.axis_name = power_axis ? "P_tot_dBW" : "rho";
  result.n_runs = cfg.n_runs;
  result.strategies = cfg.strategies;
  if (power_axis) {
    result.axis_values = cfg.power_sweep_dbw;
  } else {
    for (int r : cfg.rho_list) result.axis_values.push_back(r);
  }

  const int nt = cfg.pattern.n_beams();
  for (std::size_t ax = 0; ax < result.axis_values.size(); ++ax) {
    const double axis = result.axis_values[ax];
    const int rho = power_axis ? cfg.rho_list.front() : static_cast<int>(axis);
    const double p_tot_dbw = power_axis ? axis : cfg.link_budget.p_tot_dbw;
    const double avail_w = db_to_lin(p_tot_dbw - cfg.link_budget.obo_db);
    const PowerBudget budget = PowerBudget::uniform(avail_w, nt);

    for (int run = 0; run < cfg.n_runs; ++run) {
      // The channel does not depend on the power level, so the power sweep
      // derives its channel stream from the run index alone; the rho sweep
      // keys it on the axis as well.
      const std::uint64_t chan_key = power_axis ? 0 : ax;
      const std::uint64_t chan_seed =
          derive_seed(cfg.seed, seed_tag::kChannel, chan_key, run);

      const UserDrop drop = drop_users(cfg.pattern, rho, chan_seed);
      const RMat b = link_budget_matrix(drop, cfg.pattern, cfg.link_budget);
      const ChannelMatrix ch = apply_phases(b, chan_seed);
      const GroupSchedule sched = group_by_strongest_gain(drop, cfg.pattern);
      const std::uint64_t channel_hash = hash_matrix(ch.h);

      for (Strategy strategy : cfg.strategies) {
        RunRecord rec;
        rec.axis = axis;
        rec.strategy = strategy;
        rec.run = run;
        rec.chan_seed = chan_seed;
        rec.channel_hash = channel_hash;
        const std::uint64_t solver_seed =
            derive_seed(cfg.seed, seed_tag::kSolver, ax, run);
        try {
          const auto outcome = detail::evaluate_strategy(
              strategy, ch, sched, budget, cfg.coloring, cfg.solver, solver_seed);
          const RateReport rr =
              compute_rate_report(outcome.inputs, sched, cfg.modcod,
                                  cfg.link_budget.w_bw_hz, cfg.link_budget.alpha);
          rec.t_achieved = outcome.t_achieved;
          rec.per_beam_bps = rr.per_beam_throughput_bps;
          rec.per_user_rate_bps = rr.per_user_rate_bps;
          rec.per_user_sinr_db = rr.per_user_sinr_db;
          rec.unavailable = rr.unavailable_mask;
        } catch (const numerical_error&) {
          rec.failed = true;
          rec.per_beam_bps = RVec::Zero(nt);
        }
        result.records.push_back(std::move(rec));
      }
    }
  }
  return result;
}

}  // namespace detail

/// Per-beam throughput versus on-board power (all strategies see the same
/// channel realization at a given run index).
inline SweepResult run_power_sweep(const SimConfig& cfg) {
  return detail::run_sweep(cfg, /*power_axis=*/true);
}

/// Per-beam throughput versus users per frame, at the configured P_tot.
inline SweepResult run_rho_sweep(const SimConfig& cfg) {
  return detail::run_sweep(cfg, /*power_axis=*/false);
}

/// Writes the sweep summary, the per-run table, the per-user rate
/// distribution and a manifest tying the outputs to the config hash and
/// seed. Outputs are bit-reproducible for a given (config, seed).
inline std::vector<std::string> emit_reports(const SweepResult& result,
                                             const std::string& dir,
                                             const SimConfig& cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw config_error("emit_reports: cannot create directory " + dir);

  const int nt = cfg.pattern.n_beams();
  std::vector<std::string> files;

  auto open = [&](const std::string& name) {
    std::ofstream os(dir + "/" + name);
    if (!os) throw config_error("emit_reports: cannot open " + dir + "/" + name);
    os.precision(17);
    files.push_back(name);
    return os;
  };

  {
    auto os = open(result.axis_name == "rho" ? "rho_summary.csv" : "power_summary.csv");
    os << result.axis_name << ",strategy,mean_throughput_bps,unavailability_pct,n_ok,n_failed";
    for (int k = 0; k < nt; ++k) os << ",beam_" << k << "_bps";
    os << '\n';
    for (const auto& s : result.summarize()) {
      os << s.axis << ',' << strategy_name(s.strategy) << ',' << s.mean_bps << ','
         << s.unavailability_pct << ',' << s.n_ok << ',' << s.n_failed;
      for (int k = 0; k < nt; ++k)
        os << ',' << (s.mean_per_beam_bps.size() ? s.mean_per_beam_bps[k] : 0.0);
      os << '\n';
    }
  }
  {
    auto os = open("runs.csv");
    os << result.axis_name << ",strategy,run,chan_seed,channel_hash,failed,t_achieved";
    for (int k = 0; k < nt; ++k) os << ",beam_" << k << "_bps";
    os << '\n';
    for (const auto& r : result.records) {
      os << r.axis << ',' << strategy_name(r.strategy) << ',' << r.run << ','
         << hex64(r.chan_seed) << ',' << hex64(r.channel_hash) << ','
         << (r.failed ? 1 : 0) << ',' << r.t_achieved;
      for (int k = 0; k < nt; ++k)
        os << ',' << (r.per_beam_bps.size() ? r.per_beam_bps[k] : 0.0);
      os << '\n';
    }
  }
  {
    auto os = open("rate_distribution.csv");
    os << result.axis_name << ",strategy,run,user,sinr_db,rate_bps,unavailable\n";
    for (const auto& r : result.records) {
      if (r.failed) continue;
      for (int i = 0; i < r.per_user_rate_bps.size(); ++i)
        os << r.axis << ',' << strategy_name(r.strategy) << ',' << r.run << ',' << i
           << ',' << r.per_user_sinr_db[i] << ',' << r.per_user_rate_bps[i] << ','
           << (r.unavailable[i] ? 1 : 0) << '\n';
    }
  }
  {
    nlohmann::json manifest;
    manifest["config_hash"] = config_hash(cfg);
    manifest["seed"] = cfg.seed;
    manifest["axis"] = result.axis_name;
    manifest["axis_values"] = result.axis_values;
    manifest["n_runs"] = result.n_runs;
    std::vector<std::string> strat;
    for (Strategy s : result.strategies) strat.push_back(strategy_name(s));
    manifest["strategies"] = strat;
    manifest["records"] = result.records.size();
    auto os = open("manifest.json");
    manifest["files"] = files;
    os << manifest.dump(2) << '\n';
  }
  return files;
}

}  // namespace satprec

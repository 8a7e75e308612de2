// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "satprec/channel.hpp"
#include "satprec/common.hpp"
#include "satprec/precoding.hpp"

namespace satprec {

struct ModcodEntry {
  double threshold_db = 0.0;   // lowest SINR that supports this MODCOD
  double efficiency = 0.0;     // bits/s/Hz
  std::string name;
};

/// Ordered MODCOD table. Both columns must be strictly increasing, i.e. the
/// table is the ACM envelope: entries dominated by a cheaper MODCOD with at
/// least the same efficiency have no operating region and are rejected.
struct ModcodTable {
  std::vector<ModcodEntry> entries;
  std::string name = "custom";

  void validate() const {
    if (entries.empty()) throw config_error("modcod table: empty");
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].threshold_db <= entries[i - 1].threshold_db)
        throw config_error("modcod table: thresholds must be strictly increasing");
      if (entries[i].efficiency <= entries[i - 1].efficiency)
        throw config_error("modcod table: efficiencies must be strictly increasing");
    }
    for (const auto& e : entries)
      if (e.efficiency <= 0.0)
        throw config_error("modcod table: efficiencies must be positive");
  }

  /// DVB-S2 (EN 302 307-1) Es/N0 thresholds and spectral efficiencies,
  /// reduced to the ACM envelope (dominated MODCODs removed).
  static ModcodTable dvbs2_default() {
    ModcodTable t;
    t.name = "dvbs2";
    t.entries = {
        {-2.35, 0.490243, "QPSK 1/4"},    {-1.24, 0.656448, "QPSK 1/3"},
        {-0.30, 0.789412, "QPSK 2/5"},    {1.00, 0.988858, "QPSK 1/2"},
        {2.23, 1.188304, "QPSK 3/5"},     {3.10, 1.322253, "QPSK 2/3"},
        {4.03, 1.487473, "QPSK 3/4"},     {4.68, 1.587196, "QPSK 4/5"},
        {5.18, 1.654663, "QPSK 5/6"},     {5.50, 1.779991, "8PSK 3/5"},
        {6.42, 1.788612, "QPSK 9/10"},    {6.62, 1.980636, "8PSK 2/3"},
        {7.91, 2.228124, "8PSK 3/4"},     {8.97, 2.637201, "16APSK 2/3"},
        {10.21, 2.966728, "16APSK 3/4"},  {11.03, 3.165623, "16APSK 4/5"},
        {11.61, 3.300184, "16APSK 5/6"},  {12.73, 3.703295, "32APSK 3/4"},
        {13.64, 3.951571, "32APSK 4/5"},  {14.28, 4.119540, "32APSK 5/6"},
        {15.69, 4.397854, "32APSK 8/9"},  {16.05, 4.453027, "32APSK 9/10"},
    };
    t.validate();
    return t;
  }

  /// Loads "threshold_db, efficiency[, name]" records; '#' starts a comment.
  static ModcodTable load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("modcod table: cannot open " + path);
    ModcodTable t;
    t.name = path;
    std::string line;
    while (std::getline(is, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      std::string cell;
      ModcodEntry e;
      if (!std::getline(ls, cell, ',')) throw config_error("modcod table: bad record: " + line);
      e.threshold_db = std::stod(cell);
      if (!std::getline(ls, cell, ',')) throw config_error("modcod table: bad record: " + line);
      e.efficiency = std::stod(cell);
      if (std::getline(ls, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t");
        const auto f = cell.find_last_not_of(" \t\r");
        if (b != std::string::npos) e.name = cell.substr(b, f - b + 1);
      }
      t.entries.push_back(std::move(e));
    }
    t.validate();
    return t;
  }

  void save(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw config_error("modcod table: cannot open " + path);
    os << "# threshold_db, efficiency, name\n";
    os.precision(17);
    for (const auto& e : entries)
      os << e.threshold_db << ", " << e.efficiency << ", " << e.name << '\n';
  }
};

/// Highest efficiency whose threshold is <= sinr_db; the boundary is closed
/// (hitting a threshold exactly selects that MODCOD). Below the lowest
/// threshold the user is unavailable and gets zero.
inline double spectral_efficiency(double sinr_db, const ModcodTable& table) {
  double eff = 0.0;
  for (const auto& e : table.entries) {
    if (sinr_db >= e.threshold_db)
      eff = e.efficiency;
    else
      break;
  }
  return eff;
}

inline bool unavailable(double sinr_db, const ModcodTable& table) {
  return sinr_db < table.entries.front().threshold_db;
}

/// Frame rate under the group-minimum MODCOD rule: the worst user in the
/// group picks the MODCOD for everyone, over the effective symbol rate
/// W_bw * fraction / (1 + alpha).
inline double frame_rate(const std::vector<double>& group_sinrs_db,
                         const ModcodTable& table, double w_bw_hz, double alpha,
                         double bandwidth_fraction = 1.0) {
  if (group_sinrs_db.empty()) throw config_error("frame_rate: empty group");
  double min_sinr = group_sinrs_db.front();
  for (double s : group_sinrs_db) min_sinr = std::min(min_sinr, s);
  return spectral_efficiency(min_sinr, table) * (w_bw_hz * bandwidth_fraction) /
         (1.0 + alpha);
}

/// Per-run rate accounting for one channel realization and one strategy.
struct RateReport {
  RVec per_user_sinr_db;
  RVec per_frame_efficiency;   // per group, at the group-min SINR
  RVec per_beam_throughput_bps;
  RVec per_user_rate_bps;      // every co-group user shares the frame rate
  std::vector<bool> unavailable_mask;
};

inline RateReport compute_rate_report(const RateInputs& inputs,
                                      const GroupSchedule& sched,
                                      const ModcodTable& table, double w_bw_hz,
                                      double alpha) {
  table.validate();
  const int n_u = static_cast<int>(inputs.sinr_linear.size());
  sched.validate(n_u);
  const int g = sched.n_groups();

  RateReport rep;
  rep.per_user_sinr_db.resize(n_u);
  rep.per_frame_efficiency.resize(g);
  rep.per_beam_throughput_bps.resize(g);
  rep.per_user_rate_bps.resize(n_u);
  rep.unavailable_mask.assign(n_u, false);

  for (int i = 0; i < n_u; ++i) {
    const double lin = inputs.sinr_linear[i];
    rep.per_user_sinr_db[i] =
        lin > 0.0 ? lin_to_db(lin) : -std::numeric_limits<double>::infinity();
    rep.unavailable_mask[i] = unavailable(rep.per_user_sinr_db[i], table);
  }
  for (int k = 0; k < g; ++k) {
    std::vector<double> sinrs;
    sinrs.reserve(sched.groups[k].size());
    for (int i : sched.groups[k]) sinrs.push_back(rep.per_user_sinr_db[i]);
    const double rate =
        frame_rate(sinrs, table, w_bw_hz, alpha, inputs.bandwidth_fraction);
    double min_sinr = sinrs.front();
    for (double s : sinrs) min_sinr = std::min(min_sinr, s);
    rep.per_frame_efficiency[k] = spectral_efficiency(min_sinr, table);
    rep.per_beam_throughput_bps[k] = rate;
    for (int i : sched.groups[k]) rep.per_user_rate_bps[i] = rate;
  }
  return rep;
}

/// Aggregate over Monte Carlo runs: arithmetic per-beam means, the pooled
/// per-user rate sample, and the unavailability percentage.
struct BeamThroughputStats {
  RVec mean_per_beam_bps;
  double mean_bps = 0.0;          // average of the per-beam means
  double unavailability_pct = 0.0;
  std::vector<double> user_rates_bps;  // pooled empirical distribution
  int n_runs = 0;
};

inline BeamThroughputStats beam_throughput(const std::vector<RateReport>& runs) {
  if (runs.empty()) throw config_error("beam_throughput: need at least one run");
  const int g = static_cast<int>(runs.front().per_beam_throughput_bps.size());
  BeamThroughputStats st;
  st.mean_per_beam_bps = RVec::Zero(g);
  st.n_runs = static_cast<int>(runs.size());
  long n_users = 0, n_unavail = 0;
  for (const auto& r : runs) {
    st.mean_per_beam_bps += r.per_beam_throughput_bps;
    for (int i = 0; i < r.per_user_rate_bps.size(); ++i) {
      st.user_rates_bps.push_back(r.per_user_rate_bps[i]);
      ++n_users;
      if (r.unavailable_mask[i]) ++n_unavail;
    }
  }
  st.mean_per_beam_bps /= static_cast<double>(st.n_runs);
  st.mean_bps = st.mean_per_beam_bps.mean();
  st.unavailability_pct = 100.0 * static_cast<double>(n_unavail) /
                          static_cast<double>(std::max<long>(n_users, 1));
  return st;
}

}  // namespace satprec

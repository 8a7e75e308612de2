// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "satprec/channel.hpp"
#include "satprec/csv.hpp"
#include "satprec/rng.hpp"

using namespace satprec;

namespace {

BeamPattern test_pattern() {
  return BeamPattern::hex9(290e3, 0.215, 52.0, -30.0);
}

}  // namespace

TEST_CASE("drop_users places exactly rho users per footprint") {
  const auto pattern = test_pattern();
  const auto drop = drop_users(pattern, 2, 7);
  CHECK(drop.n_users() == 18);
  std::vector<int> per_beam(9, 0);
  for (int u = 0; u < drop.n_users(); ++u) {
    const int k = drop.home_beam[u];
    ++per_beam[k];
    CHECK((drop.positions_m[u] - pattern.centers_m[k]).norm() <=
          pattern.footprint_radius_m + 1e-9);
  }
  for (int k = 0; k < 9; ++k) CHECK(per_beam[k] == 2);
}

TEST_CASE("drop_users is deterministic in the seed") {
  const auto pattern = test_pattern();
  const auto a = drop_users(pattern, 1, 7);
  const auto b = drop_users(pattern, 1, 7);
  for (int u = 0; u < a.n_users(); ++u) {
    CHECK(a.positions_m[u].x() == b.positions_m[u].x());
    CHECK(a.positions_m[u].y() == b.positions_m[u].y());
    CHECK(a.slant_range_m[u] == b.slant_range_m[u]);
  }
  const auto c = drop_users(pattern, 1, 8);
  bool any_diff = false;
  for (int u = 0; u < a.n_users(); ++u)
    if (a.positions_m[u] != c.positions_m[u]) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("drops nest: rho users per beam are a prefix of rho+1") {
  const auto pattern = test_pattern();
  const auto small = drop_users(pattern, 2, 42);
  const auto large = drop_users(pattern, 3, 42);
  for (int u = 0; u < small.n_users(); ++u) {
    CHECK(small.positions_m[u] == large.positions_m[u]);
  }
}

TEST_CASE("every dropped user is strongest in its home beam") {
  // Oracle: evaluate the pattern gain toward every beam directly.
  const auto pattern = test_pattern();
  const auto drop = drop_users(pattern, 3, 123);
  for (int u = 0; u < drop.n_users(); ++u) {
    const int home = drop.home_beam[u];
    const double own = pattern.gain_dbi(drop.positions_m[u], home);
    for (int j = 0; j < pattern.n_beams(); ++j)
      if (j != home) CHECK(own > pattern.gain_dbi(drop.positions_m[u], j));
  }
}

TEST_CASE("zero-area footprint is a configuration error") {
  auto pattern = test_pattern();
  pattern.footprint_radius_m = 0.0;
  CHECK_THROWS_AS(drop_users(pattern, 1, 1), config_error);
}

TEST_CASE("strongest-beam ties break toward the lowest index") {
  BeamPattern p;
  p.centers_m = {Vec2(-100e3, 0.0), Vec2(100e3, 0.0)};
  p.footprint_radius_m = 100e3;
  p.beamwidth_3db_deg = 0.3;
  const Vec2 midpoint(0.0, 0.0);
  CHECK(p.strongest_beam(midpoint) == 0);
}

TEST_CASE("beam gain is monotone down to the sidelobe floor") {
  for (const Taper taper : {Taper::kGaussian, Taper::kBesselTaper}) {
    auto p = test_pattern();
    p.taper = taper;
    double prev = p.gain_dbi(p.centers_m[4], 4);
    const double floor_dbi = p.boresight_gain_dbi + p.sidelobe_floor_db;
    for (int step = 1; step <= 400; ++step) {
      const Vec2 pos = p.centers_m[4] + Vec2(step * 5e3, 0.0);
      const double g = p.gain_dbi(pos, 4);
      CHECK(g <= prev + 1e-12);
      CHECK(g >= floor_dbi - 1e-12);
      prev = g;
    }
    CHECK(prev == doctest::Approx(floor_dbi));
  }
}

TEST_CASE("link budget scales as 1/d and sqrt(G)") {
  const auto pattern = test_pattern();
  LinkBudgetParams params;

  UserDrop drop;
  drop.positions_m = {pattern.centers_m[0], pattern.centers_m[0]};
  drop.slant_range_m = RVec(2);
  drop.slant_range_m << 35786e3, 2 * 35786e3;
  drop.home_beam = {0, 0};
  drop.users_per_beam = 1;

  const RMat b = link_budget_matrix(drop, pattern, params);
  for (int j = 0; j < pattern.n_beams(); ++j)
    CHECK(b(0, j) == doctest::Approx(2.0 * b(1, j)).epsilon(1e-12));

  // +6.0206 dB of beam gain (factor 4 linear) doubles the channel magnitude.
  auto hot = pattern;
  hot.boresight_gain_dbi += 10.0 * std::log10(4.0);
  const RMat b4 = link_budget_matrix(drop, hot, params);
  for (int j = 0; j < pattern.n_beams(); ++j)
    CHECK(b4(0, j) == doctest::Approx(2.0 * b(0, j)).epsilon(1e-12));
}

TEST_CASE("link budget golden value for the Table I operating point") {
  // Independently computed (mpmath): G_R = 40.7 dBi, G = 52 dBi,
  // d = 35786 km, f = 20 GHz, T_cs = 235.3 K, W_bw = 500 MHz.
  BeamPattern p;
  p.centers_m = {Vec2(0.0, 0.0)};
  p.boresight_gain_dbi = 52.0;
  p.beamwidth_3db_deg = 0.215;
  p.footprint_radius_m = 145e3;

  UserDrop drop;
  drop.positions_m = {Vec2(0.0, 0.0)};  // boresight: gain is exactly 52 dBi
  drop.slant_range_m = RVec::Constant(1, 35786e3);
  drop.home_beam = {0};
  drop.users_per_beam = 1;

  LinkBudgetParams params;
  const RMat b = link_budget_matrix(drop, p, params);
  CHECK(b(0, 0) == doctest::Approx(1.1285740980823248).epsilon(1e-12));
}

TEST_CASE("link budget rejects non-positive physics") {
  const auto pattern = test_pattern();
  UserDrop drop;
  drop.positions_m = {Vec2(0.0, 0.0)};
  drop.slant_range_m = RVec::Constant(1, -1.0);
  drop.home_beam = {0};
  drop.users_per_beam = 1;
  LinkBudgetParams params;
  CHECK_THROWS_AS(link_budget_matrix(drop, pattern, params), config_error);

  drop.slant_range_m[0] = 35786e3;
  params.t_cs_k = 0.0;
  CHECK_THROWS_AS(link_budget_matrix(drop, pattern, params), config_error);
}

TEST_CASE("apply_phases keeps magnitudes and a common phase per row") {
  const auto pattern = test_pattern();
  const auto drop = drop_users(pattern, 2, 5);
  const RMat b = link_budget_matrix(drop, pattern, LinkBudgetParams{});

  const ChannelMatrix zero = apply_phases(b, 5, PhaseMode::kZero);
  CHECK((zero.h.real() - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.h.imag().cwiseAbs().maxCoeff() == 0.0);

  const ChannelMatrix ch = apply_phases(b, 5);
  CHECK((ch.h.cwiseAbs() - b).cwiseAbs().maxCoeff() < 1e-12);
  for (int r = 0; r < b.rows(); ++r) {
    CHECK(ch.phase_rad[r] > 0.0);
    CHECK(ch.phase_rad[r] <= 2.0 * M_PI);
    const cxd rot = std::polar(1.0, ch.phase_rad[r]);
    for (int c = 0; c < b.cols(); ++c) {
      if (b(r, c) == 0.0) continue;
      CHECK(std::abs(ch.h(r, c) / b(r, c) - rot) < 1e-12);
    }
  }

  const ChannelMatrix again = apply_phases(b, 5);
  CHECK(hash_matrix(again.h) == hash_matrix(ch.h));
}

TEST_CASE("group schedule covers users disjointly with rho per group") {
  const auto pattern = test_pattern();
  const auto drop = drop_users(pattern, 3, 11);
  const auto sched = group_by_strongest_gain(drop, pattern);

  CHECK(sched.n_groups() == 9);
  CHECK(sched.users_per_group == 3);
  std::set<int> seen;
  for (const auto& g : sched.groups) {
    CHECK(static_cast<int>(g.size()) == 3);
    for (int u : g) CHECK(seen.insert(u).second);
  }
  CHECK(static_cast<int>(seen.size()) == drop.n_users());
}

TEST_CASE("slice_equivalent_channels obeys the indexing contract") {
  // rho = 2, N_t = 2, groups {0,1} and {2,3}: slice 0 takes rows {0,2},
  // slice 1 takes rows {1,3}.
  CMat h(4, 2);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) h(r, c) = cxd(r + 1, c);
  GroupSchedule sched;
  sched.groups = {{0, 1}, {2, 3}};
  sched.users_per_group = 2;

  const auto slices = slice_equivalent_channels(h, sched);
  REQUIRE(slices.size() == 2);
  CHECK(slices[0].row(0) == h.row(0));
  CHECK(slices[0].row(1) == h.row(2));
  CHECK(slices[1].row(0) == h.row(1));
  CHECK(slices[1].row(1) == h.row(3));
}

TEST_CASE("rho = 1 slicing returns H with rows in group order") {
  CMat h(2, 2);
  h << cxd(1, 0), cxd(2, 0), cxd(3, 0), cxd(4, 0);
  GroupSchedule sched;
  sched.groups = {{1}, {0}};  // group 0 serves user 1
  sched.users_per_group = 1;
  const auto slices = slice_equivalent_channels(h, sched);
  REQUIRE(slices.size() == 1);
  CHECK(slices[0].row(0) == h.row(1));
  CHECK(slices[0].row(1) == h.row(0));
}

TEST_CASE("slices partition the rows of H") {
  const auto pattern = test_pattern();
  for (int rho : {1, 2, 4}) {
    const auto drop = drop_users(pattern, rho, 17 + rho);
    const RMat b = link_budget_matrix(drop, pattern, LinkBudgetParams{});
    const ChannelMatrix ch = apply_phases(b, 17 + rho);
    const auto sched = group_by_strongest_gain(drop, pattern);
    const auto slices = slice_equivalent_channels(ch.h, sched);

    std::vector<char> used(drop.n_users(), 0);
    for (int i = 0; i < rho; ++i) {
      for (int k = 0; k < sched.n_groups(); ++k) {
        const int u = sched.groups[k][i];
        CHECK(!used[u]);
        used[u] = 1;
        CHECK((slices[i].row(k) - ch.h.row(u)).cwiseAbs().maxCoeff() == 0.0);
      }
    }
    for (char c : used) CHECK(c == 1);
  }
}

TEST_CASE("ragged schedules are rejected") {
  CMat h = CMat::Identity(3, 2);
  GroupSchedule sched;
  sched.groups = {{0, 1}, {2}};
  sched.users_per_group = 2;
  CHECK_THROWS_AS(slice_equivalent_channels(h, sched), config_error);
}

TEST_CASE("complex matrix CSV round-trips exactly") {
  Rng rng(99);
  CMat m(3, 4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = cxd(rng.normal(), rng.normal());
  std::stringstream ss;
  write_complex_matrix_csv(m, ss);
  const CMat back = read_complex_matrix_csv(ss);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

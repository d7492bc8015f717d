#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "advcsp/advice.hpp"
#include "advcsp/errors.hpp"
#include "advcsp/maxcut_advice.hpp"
#include "advcsp/rng.hpp"

using namespace advcsp;

TEST_CASE("parameters") {
  const auto p = MaxCutParams::asymptotic_defaults();
  CHECK(p.threshold(2, 4) == doctest::Approx(20 * std::sqrt(2 * std::log(4.0))));
  CHECK(p.slack(64, 1024, 0.3) == doctest::Approx(30 * std::sqrt(64 * std::log(1024.0)) / 0.3));
  CHECK_THROWS_AS(validate(MaxCutParams{0.0, 1.0}), InputError);
  CHECK_THROWS_AS(validate(MaxCutParams{1.0, -1.0}), InputError);
}

TEST_CASE("delta is the neighbour advice sum") {
  GraphInstance star(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const Assignment adv(std::vector<Spin>{1, 1, 1, -1, 1, -1});
  const auto d = compute_deltas(star, LabelAdvice{adv, 0.5});
  CHECK(d[0] == 2);
  CHECK(d[5] == 0);
  CHECK(d[1] == 1);
  CHECK_THROWS_AS(compute_deltas(star, LabelAdvice{Assignment(5), 0.5}), InputError);
}

TEST_CASE("split membership") {
  const auto p = MaxCutParams::asymptotic_defaults();
  const auto all_q = split_vertices({2, -2, 0, 1}, 2, 4, p);
  CHECK(all_q.confident.empty());
  CHECK(all_q.uncertain.size() == 4);

  // threshold at d=2, n=4 is about 33.3
  const auto s = split_vertices({40, -40, 0}, 2, 4, p);
  CHECK(s.t_side == std::vector<std::uint32_t>{0});
  CHECK(s.s_side == std::vector<std::uint32_t>{1});
  CHECK(s.uncertain == std::vector<std::uint32_t>{2});

  // c1 chosen so the threshold is exactly 3.
  MaxCutParams crafted{3.0 / std::sqrt(4 * std::log(16.0)), 1.0};
  for (int guard = 0; guard < 8 && crafted.threshold(4, 16) != 3.0; ++guard) {
    crafted.c1 = std::nextafter(crafted.c1, crafted.threshold(4, 16) > 3.0 ? 0.0 : 1.0);
  }
  REQUIRE(crafted.threshold(4, 16) == 3.0);
  const auto b = split_vertices({3, -3, 2}, 4, 16, crafted);
  CHECK(b.threshold == doctest::Approx(3.0));
  CHECK(b.t_side == std::vector<std::uint32_t>{0});
  CHECK(b.s_side == std::vector<std::uint32_t>{1});
}

TEST_CASE("lp structure") {
  GraphInstance cycle(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto p = MaxCutParams::asymptotic_defaults();
  const auto split = split_vertices({0, 0, 0, 0}, 2, 4, p);
  const auto lp = build_lp(cycle, split, 2, 1.0, p);
  CHECK(lp.num_vars() == 4);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(lp.var_lower[j] == 0.0);
    CHECK(lp.var_upper[j] == 1.0);
  }
  GraphInstance path(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(build_lp(path, split_vertices({0, 0, 0}, 2, 3, p), 2, 1.0, p), InputError);

  // Q empty: no variables.
  const MaxCutParams tiny{1e-6, 1.0};
  const auto none = split_vertices({1, -1, 1, -1}, 2, 4, tiny);
  const auto empty = build_lp(cycle, none, 2, 1.0, tiny);
  CHECK(empty.num_vars() == 0);
  const auto opt = solve_balanced(empty);
  REQUIRE(opt.has_value());
  CHECK(opt->value == 0.0);
}

TEST_CASE("lp objective counts edges to the confident sides") {
  // Vertex 0 uncertain, neighbours 1 in S_L and 2 in T_L.
  GraphInstance g(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const MaxCutParams p{1.0, 1.0};
  LandscapeSplit split;
  split.delta = {0, -9, 9, 0};
  split.s_side = {1};
  split.t_side = {2};
  split.confident = {1, 2};
  split.uncertain = {0, 3};
  const auto deg = side_degrees(g, split);
  CHECK(deg.to_s[0] == 1);
  CHECK(deg.to_t[0] == 1);
  const auto lp = build_lp(g, split, 2, 1.0, p);
  const auto opt = solve_balanced(lp);
  REQUIRE(opt.has_value());
  // Each uncertain vertex cuts exactly one confident edge whatever its side.
  CHECK(opt->value == doctest::Approx(2.0));
  for (double t : opt->theta) CHECK(t == doctest::Approx(0.5));
}

TEST_CASE("rounding") {
  const auto ones = round_lp({1.0, 0.0, 1.0}, 3);
  CHECK(ones == std::vector<std::uint8_t>{1, 0, 1});
  std::vector<double> half(10000, 0.5);
  const auto r = round_lp(half, 11);
  const double mean = static_cast<double>(std::count(r.begin(), r.end(), 1)) / 10000.0;
  CHECK(std::abs(mean - 0.5) <= 0.015);
  CHECK(round_lp(half, 11) == r);
  CHECK_THROWS_AS(round_lp({1.1}, 1), InputError);
  CHECK(round_lp({1.0 + 1e-12, -1e-12}, 1) == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("four-cycle degenerate case") {
  GraphInstance cycle(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto r = solve_maxcut_with_advice(cycle, LabelAdvice{Assignment(std::vector<Spin>{1, -1, 1, -1}), 1.0},
                                          MaxCutParams::asymptotic_defaults(), 1);
  CHECK(r.split.confident.empty());
  CHECK(r.side.size() == 4);
  CHECK(r.cut_weight >= 0.0);
  CHECK(r.cut_weight == static_cast<double>(cycle.cut_size(r.side)));
}

TEST_CASE("planted pipeline internal identities") {
  const auto plant = plant_bipartite_regular(256, 16, 0.0, 3);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto adv = gen_label_advice(plant.planted, 0.5, derive_seed(s, 1));
    const auto r = solve_maxcut_with_advice(plant.graph, adv, MaxCutParams::bench_preset(), derive_seed(s, 2));
    const auto& dg = r.diagnostics;
    CHECK(r.cut_weight == static_cast<double>(plant.graph.cut_size(r.side)));
    CHECK(dg.q_cut_twice_identity == 2 * dg.q_cut_direct);
    // S_L vertices sit on side +1.
    for (auto v : r.split.s_side) CHECK(r.side[v] == 1);
    for (auto v : r.split.t_side) CHECK(r.side[v] == -1);
    long long f = 0;
    for (std::size_t q = 0; q < r.split.uncertain.size(); ++q) {
      f += r.side[r.split.uncertain[q]] == 1 ? dg.d_t[q] : dg.d_s[q];
    }
    CHECK(f == dg.f_value);
  }
}

TEST_CASE("pipeline is deterministic") {
  const auto plant = plant_bipartite_regular(128, 8, 0.0, 4);
  const auto adv = gen_label_advice(plant.planted, 0.5, 1);
  const auto a = solve_maxcut_with_advice(plant.graph, adv, MaxCutParams::bench_preset(), 9);
  const auto b = solve_maxcut_with_advice(plant.graph, adv, MaxCutParams::bench_preset(), 9);
  CHECK(a.side == b.side);
  GraphInstance path(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(solve_maxcut_with_advice(path, LabelAdvice{Assignment(3), 0.5}, MaxCutParams{}, 1), InputError);
}

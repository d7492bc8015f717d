#include <doctest.h>

#include <cmath>

#include "advcsp/errors.hpp"
#include "advcsp/lp.hpp"
#include "advcsp/rng.hpp"
#include "oracles.hpp"

using namespace advcsp;

namespace {

LinearProgram random_lp(std::uint64_t seed) {
  CounterRng rng(seed);
  const std::size_t p = 1 + rng.below(6);
  const std::size_t rows = rng.below(7);
  LinearProgram lp(p, 0.0, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    lp.objective[j] = std::round((rng.uniform() * 4 - 2) * 4) / 4;
    lp.var_lower[j] = -static_cast<double>(rng.below(3));
    lp.var_upper[j] = lp.var_lower[j] + 1 + static_cast<double>(rng.below(3));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t j = 0; j < p; ++j) {
      if (rng.bernoulli(0.7)) terms.push_back({j, static_cast<double>(static_cast<int>(rng.below(7)) - 3)});
    }
    const double a = rng.uniform() * 8 - 4;
    const double width = rng.bernoulli(0.2) ? 0.0 : rng.uniform() * 4;
    const int kind = static_cast<int>(rng.below(3));
    lp.add_row(terms, kind == 1 ? -kInf : a, kind == 2 ? kInf : a + width);
  }
  return lp;
}

}  // namespace

TEST_CASE("ranged row example") {
  LinearProgram lp(2, 0.0, 1.0);
  lp.objective = {1.0, 1.0};
  lp.add_row({{0, 1.0}, {1, 1.0}}, 1.0, 1.5);
  const auto out = solve_lp(lp);
  REQUIRE(std::holds_alternative<LpOptimal>(out));
  CHECK(std::get<LpOptimal>(out).value == doctest::Approx(1.5));
}

TEST_CASE("infeasible and unbounded outcomes") {
  LinearProgram inf(2, 0.0, 1.0);
  inf.add_row({{0, 1.0}, {1, 1.0}}, 3.0, 4.0);
  CHECK(std::holds_alternative<LpInfeasible>(solve_lp(inf)));

  LinearProgram unb(2);
  unb.objective = {1.0, 0.0};
  unb.add_row({{0, 1.0}, {1, -1.0}}, -kInf, 1.0);
  CHECK(std::holds_alternative<LpUnbounded>(solve_lp(unb)));
}

TEST_CASE("empty program") {
  LinearProgram lp(0);
  const auto out = solve_lp(lp);
  REQUIRE(std::holds_alternative<LpOptimal>(out));
  CHECK(std::get<LpOptimal>(out).value == 0.0);
}

TEST_CASE("free and mirrored variables") {
  LinearProgram lp(2, -kInf, kInf);
  lp.objective = {-1.0, 2.0};
  lp.var_upper[1] = 3.0;
  lp.var_lower[1] = -kInf;
  lp.add_row({{0, 1.0}, {1, -1.0}}, -2.0, kInf);
  lp.objective_offset = 0.5;
  const auto out = solve_lp(lp);
  REQUIRE(std::holds_alternative<LpOptimal>(out));
  // x1 = 3 and x0 >= 1, so the best is -1 + 6 + 0.5.
  CHECK(std::get<LpOptimal>(out).value == doctest::Approx(5.5));
}

TEST_CASE("invalid programs") {
  LinearProgram nan_cost(1, 0.0, 1.0);
  nan_cost.objective[0] = std::nan("");
  CHECK_THROWS_AS(solve_lp(nan_cost), InputError);
  LinearProgram inverted(1, 1.0, 0.0);
  CHECK_THROWS_AS(solve_lp(inverted), InputError);
  LinearProgram bad_index(1, 0.0, 1.0);
  bad_index.add_row({{3, 1.0}}, 0.0, 1.0);
  CHECK_THROWS_AS(solve_lp(bad_index), InputError);
  LinearProgram bad_row(1, 0.0, 1.0);
  bad_row.add_row({{0, 1.0}}, 2.0, 1.0);
  CHECK_THROWS_AS(solve_lp(bad_row), InputError);
}

TEST_CASE("random programs agree with vertex enumeration") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto lp = random_lp(derive_seed(123, s));
    const auto expected = oracle::lp_vertex_optimum(lp);
    const auto out = solve_lp(lp);
    CAPTURE(s);
    if (!expected) {
      CHECK(std::holds_alternative<LpInfeasible>(out));
      continue;
    }
    REQUIRE(std::holds_alternative<LpOptimal>(out));
    const auto& opt = std::get<LpOptimal>(out);
    CHECK(std::abs(opt.value - *expected) <= 1e-6 * std::max(1.0, std::abs(*expected)));
    CHECK(max_violation(lp, opt.point) <= 1e-7);
    CHECK(std::abs(objective_value(lp, opt.point) - opt.value) <= 1e-7 * std::max(1.0, std::abs(opt.value)));
  }
}

TEST_CASE("optimum dominates feasible witnesses") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    CounterRng rng(s);
    const std::size_t p = 8;
    LinearProgram lp(p, 0.0, 1.0);
    std::vector<double> witness(p);
    for (auto& w : witness) w = rng.uniform();
    for (auto& c : lp.objective) c = rng.uniform() * 2 - 1;
    for (int r = 0; r < 5; ++r) {
      std::vector<std::pair<std::size_t, double>> terms;
      double at = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double a = rng.uniform() * 2 - 1;
        terms.push_back({j, a});
        at += a * witness[j];
      }
      lp.add_row(terms, at - rng.uniform(), at + rng.uniform());
    }
    const auto out = solve_lp(lp);
    REQUIRE(std::holds_alternative<LpOptimal>(out));
    CHECK(std::get<LpOptimal>(out).value >= objective_value(lp, witness) - 1e-9);
  }
}

TEST_CASE("solves are deterministic") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto lp = random_lp(s);
    const auto a = solve_lp(lp);
    const auto b = solve_lp(lp);
    REQUIRE(a.index() == b.index());
    if (const auto* pa = std::get_if<LpOptimal>(&a)) {
      const auto& pb = std::get<LpOptimal>(b);
      CHECK(pa->point == pb.point);
      CHECK(pa->value == pb.value);
    }
  }
}

#include <doctest.h>

#include "advcsp/errors.hpp"
#include "advcsp/reduction.hpp"
#include "advcsp/rng.hpp"
#include "oracles.hpp"

using namespace advcsp;

TEST_CASE("counting") {
  KLinInstance phi(3, 3);
  phi.add({0, 1, 2}, 1);
  phi.add({0, 1, 2}, -1);
  const auto lift = three_to_four_lin(phi, 2);
  CHECK(lift.instance.num_vars() == 5);
  CHECK(lift.instance.num_constraints() == 4);
  CHECK(lift.instance.arity() == 4);
  const auto one = three_to_four_lin(phi, 1);
  CHECK(one.instance.num_vars() == 4);
  CHECK(one.instance.num_constraints() == 2);
  CHECK_THROWS_AS(three_to_four_lin(phi, 0), InputError);
  CHECK_THROWS_AS(three_to_four_lin(KLinInstance(2, 3), 2), InputError);
}

TEST_CASE("copy layout") {
  KLinInstance phi(3, 4);
  phi.add({0, 1, 2}, 1);
  phi.add({1, 2, 3}, -1);
  const auto lift = three_to_four_lin(phi, 3);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const auto v = lift.instance.vars(r * 2 + c);
      CHECK(v[3] == 4 + r);
      CHECK(lift.instance.rhs(r * 2 + c) == phi.rhs(c));
    }
  }
}

TEST_CASE("average incidence") {
  const auto plant = plant_klin(30, 3, 200, 0.2, 1);
  const auto lift = three_to_four_lin(plant.instance, 6);
  std::vector<std::size_t> inc(36, 0);
  for (std::size_t c = 0; c < lift.instance.num_constraints(); ++c) {
    for (auto v : lift.instance.vars(c)) ++inc[v];
  }
  std::size_t total = 0;
  for (auto x : inc) total += x;
  CHECK(static_cast<double>(total) / 4.0 / 36.0 == doctest::Approx(200.0 * 6 / 36.0));
  for (std::size_t r = 0; r < 6; ++r) CHECK(inc[30 + r] == 200);
}

TEST_CASE("lift and project") {
  const auto plant = plant_klin(20, 3, 100, 0.0, 2);
  const auto lifted = lift_assignment(plant.planted, 4);
  CHECK(lifted.size() == 24);
  const auto lift = three_to_four_lin(plant.instance, 4);
  CHECK(evaluate(lift.instance, lifted).fraction == 1.0);
  const auto back = project_assignment(lifted, plant.instance);
  CHECK(back.x == plant.planted);
  CHECK(back.copy == 0);
  CHECK_THROWS_AS(project_assignment(Assignment(20), plant.instance), InputError);
}

TEST_CASE("completeness and soundness on random inputs") {
  CounterRng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.below(12);
    const std::size_t t = 1 + rng.below(8);
    const auto phi = plant_klin(n, 3, 5 + rng.below(40), rng.uniform() * 0.5, rng()).instance;
    std::vector<Spin> sv(n), pv(n + t);
    for (auto& s : sv) s = static_cast<Spin>(rng.sign());
    for (auto& s : pv) s = static_cast<Spin>(rng.sign());
    const Assignment sigma(sv), sigma_prime(pv);
    const auto lift = three_to_four_lin(phi, t);
    CHECK(oracle::recount(lift.instance, lift_assignment(sigma, t)) ==
          static_cast<double>(t) * oracle::recount(phi, sigma));
    const auto proj = project_assignment(sigma_prime, phi);
    CHECK(proj.weight * static_cast<double>(t) >= oracle::recount(lift.instance, sigma_prime));
    CHECK(proj.weight == oracle::recount(phi, proj.x));
  }
}

TEST_CASE("projection picks the best copy, lowest on ties") {
  KLinInstance phi(3, 3);
  phi.add({0, 1, 2}, 1);
  const Assignment all_plus(5);
  CHECK(project_assignment(all_plus, phi).copy == 0);
  const Assignment second(std::vector<Spin>{-1, 1, 1, -1, 1});
  // copy 0 negates the base to (1,-1,-1), product 1; copy 1 keeps (-1,1,1), product -1.
  CHECK(project_assignment(second, phi).copy == 0);
}

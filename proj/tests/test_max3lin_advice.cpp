#include <doctest.h>

#include <cmath>

#include "advcsp/advice.hpp"
#include "advcsp/errors.hpp"
#include "advcsp/max3lin_advice.hpp"
#include "advcsp/rng.hpp"
#include "oracles.hpp"

using namespace advcsp;

namespace {

Assignment spins(std::initializer_list<int> v) {
  std::vector<Spin> out;
  for (int s : v) out.push_back(static_cast<Spin>(s));
  return Assignment(std::move(out));
}

}  // namespace

TEST_CASE("threshold") {
  CHECK(heavy_threshold(0.05, 0.9) == 30);
  CHECK(heavy_threshold(0.05, 1.0) == 24);
  CHECK(heavy_threshold(0.5, 1.0) == 6);
  CHECK_THROWS_AS(heavy_threshold(0.0, 0.5), InputError);
  CHECK_THROWS_AS(heavy_threshold(0.1, 0.0), InputError);
}

TEST_CASE("classification by pair counts") {
  KLinInstance phi(3, 7);
  phi.add({1, 2, 3}, 1);
  phi.add({1, 2, 4}, 1);
  phi.add({1, 2, 5}, 1);
  phi.add({3, 4, 6}, 1);
  phi.add({3, 4, 0}, -1);
  const auto cls = classify_constraints(phi, 3);
  CHECK(cls.pairs.heavy[cls.pairs.find(1, 2)] == 1);
  CHECK(cls.pairs.heavy[cls.pairs.find(3, 4)] == 0);
  CHECK(cls.light.constraint_heavy == std::vector<std::uint8_t>{1, 1, 1, 0, 0});
  CHECK(cls.light.sets[3] == std::vector<std::uint32_t>{3, 4});
  CHECK(cls.light.sets[1].empty());

  const auto all = classify_constraints(phi, 1);
  for (auto h : all.pairs.heavy) CHECK(h == 1);
  for (const auto& s : all.light.sets) CHECK(s.empty());

  KLinInstance two(2, 3);
  CHECK_THROWS_AS(classify_constraints(two, 2), InputError);
}

TEST_CASE("pair incidence invariants") {
  const auto plant = plant_klin(40, 3, 800, 0.1, 3);
  const auto cls = classify_constraints(plant.instance, 5);
  std::vector<std::size_t> seen(800, 0);
  for (std::size_t p = 0; p < cls.pairs.size(); ++p) {
    if (p > 0) CHECK(cls.pairs.keys[p - 1] < cls.pairs.keys[p]);
    CHECK((cls.pairs.constraints(p).size() >= 5) == (cls.pairs.heavy[p] == 1));
    for (auto c : cls.pairs.constraints(p)) ++seen[c];
  }
  for (auto s : seen) CHECK(s == 3);
  std::vector<std::size_t> light_seen(800, 0);
  for (const auto& set : cls.light.sets) {
    for (auto c : set) ++light_seen[c];
  }
  for (std::size_t c = 0; c < 800; ++c) CHECK(light_seen[c] == (cls.light.constraint_heavy[c] ? 0u : 3u));
}

TEST_CASE("heavy batch hand example") {
  KLinInstance phi(3, 6);
  phi.add({1, 2, 3}, 1);
  phi.add({1, 2, 4}, -1);
  phi.add({1, 2, 5}, 1);
  const auto adv = spins({1, 1, 1, 1, -1, 1});
  const std::vector<std::uint32_t> members = {0, 1, 2};
  const auto batch = create_h_constraints(1, 2, members, adv, phi, 0);
  CHECK(batch.sign == 1);
  REQUIRE(batch.constraints.size() == 6);
  CHECK(batch.constraints[0].rhs == 1);
  CHECK_FALSE(batch.constraints[0].unary);
  CHECK(batch.constraints[1].a == 3);
  CHECK(batch.constraints[1].rhs == 1);
  CHECK(batch.constraints[3].a == 4);
  CHECK(batch.constraints[3].rhs == -1);
  CHECK(batch.constraints[5].a == 5);
  CHECK(batch.constraints[5].rhs == 1);
  for (const auto& c : batch.constraints) CHECK_FALSE(c.always_violated);
}

TEST_CASE("zero sign sum flags the batch") {
  KLinInstance phi(3, 4);
  phi.add({0, 1, 2}, 1);
  phi.add({0, 1, 3}, -1);
  const auto batch = create_h_constraints(0, 1, std::vector<std::uint32_t>{0, 1}, Assignment(4), phi, 0);
  CHECK(batch.sign == 0);
  for (const auto& c : batch.constraints) {
    CHECK(c.always_violated);
    CHECK_FALSE(c.satisfied(Assignment(4)));
  }
  // sigma is replaced by +1, so the unary representative reads x_k = c.
  CHECK(batch.constraints[0].rhs == 1);
  CHECK(batch.constraints[1].rhs == 1);
  CHECK(batch.constraints[2].rhs == 1);
  CHECK(batch.constraints[3].rhs == -1);
}

TEST_CASE("light batch") {
  KLinInstance phi(3, 4);
  phi.add({1, 2, 3}, 1);
  const auto batch = create_l_constraints(1, std::vector<std::uint32_t>{0}, spins({1, 1, 1, -1}), phi);
  CHECK(batch.sign == -1);
  REQUIRE(batch.constraints.size() == 1);
  CHECK(batch.constraints[0].unary);
  CHECK(batch.constraints[0].rhs == -1);
  CHECK(create_l_constraints(1, std::vector<std::uint32_t>{}, Assignment(4), phi).constraints.empty());
}

TEST_CASE("noiseless plant with exact advice") {
  const auto plant = plant_klin(60, 3, 2000, 0.0, 8);
  const auto psi = build_psi(plant.instance, plant.planted, 0.05, 1.0);
  for (std::size_t i = 0; i < 60; ++i) {
    if (psi.var_sign[i] != 0) CHECK(psi.var_sign[i] == plant.planted[i]);
  }
  CHECK(psi.flagged() == 0);
  CHECK(psi.value(plant.planted) == static_cast<double>(psi.constraints.size()));
  CHECK(psi.solvable().satisfied_weight(plant.planted) == psi.solvable().total_weight());
}

TEST_CASE("reduced instance counting") {
  const auto plant = plant_klin(50, 3, 3000, 0.1, 9);
  const auto adv = gen_label_advice(plant.planted, 0.8, 2);
  const auto psi = build_psi(plant.instance, adv.values, 0.1, 0.8);
  std::size_t expected = 0;
  for (std::size_t p = 0; p < psi.classes.pairs.size(); ++p) {
    if (psi.classes.pairs.heavy[p]) expected += 2 * psi.classes.pairs.constraints(p).size();
  }
  std::size_t light = 0;
  for (std::size_t c = 0; c < 3000; ++c) light += !psi.classes.light.constraint_heavy[c];
  expected += 3 * light;
  CHECK(psi.constraints.size() == expected);
  for (const auto& c : psi.constraints) CHECK(c.source < 3000);

  const auto solvable = psi.solvable();
  CHECK(solvable.num_constraints() + psi.flagged() == psi.constraints.size());
  const auto x = adv.values;
  CHECK(psi.value(x) == solvable.satisfied_weight(x));

  KLinInstance empty(3, 5);
  CHECK(build_psi(empty, Assignment(5), 0.1, 0.5).constraints.empty());
}

TEST_CASE("end to end on a clean plant") {
  std::size_t perfect = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto plant = plant_klin(60, 3, 3000, 0.0, derive_seed(s, 0));
    const auto adv = gen_label_advice(plant.planted, 1.0, derive_seed(s, 1));
    const auto r = solve_max3lin_with_advice(plant.instance, adv, 0.05, derive_seed(s, 2));
    CHECK(r.weight == oracle::recount(plant.instance, r.x));
    CHECK(r.diagnostics.implication_failures == 0);
    perfect += r.fraction == 1.0;
  }
  CHECK(perfect >= 9);
}

TEST_CASE("accounting and heavy implication hold") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto plant = plant_klin(40, 3, 8000, 0.1, derive_seed(s, 5));
    const auto adv = gen_label_advice(plant.planted, 0.7, derive_seed(s, 6));
    const auto psi = build_psi(plant.instance, adv.values, 0.1, 0.7);
    const auto r = solve_max3lin_with_advice(plant.instance, adv, 0.1, s);
    CHECK(audit_accounting(plant.instance, psi, r.x, plant.planted).holds());
    CHECK(heavy_implication_failures(plant.instance, psi, r.x) == 0);
    CHECK(r.diagnostics.heavy_pairs > 0);
  }
}

TEST_CASE("constraint floor flag") {
  const auto small = plant_klin(30, 3, 200, 0.05, 1);
  const auto r = solve_max3lin_with_advice(small.instance, gen_label_advice(small.planted, 0.9, 1), 0.05, 1);
  CHECK(r.diagnostics.below_constraint_floor);
}

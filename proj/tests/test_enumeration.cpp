#include <doctest.h>

#include <map>

#include "advcsp/errors.hpp"
#include "advcsp/enumeration.hpp"
#include "advcsp/qp_advice.hpp"
#include "advcsp/rng.hpp"
#include "oracles.hpp"

using namespace advcsp;

namespace {

std::uint64_t binomial_sum(std::size_t n, std::size_t top) {
  // Pascal triangle, independent of the library's count.
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  std::uint64_t total = 0;
  for (std::size_t t = 0; t <= top && t <= n; ++t) total += c[n][t] << t;
  return total;
}

KLinInstance satisfiable_2lin(std::size_t n, std::size_t m, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Spin> hidden(n);
  for (auto& h : hidden) h = static_cast<Spin>(rng.sign());
  KLinInstance inst(2, n);
  for (std::size_t c = 0; c < m; ++c) {
    const auto a = static_cast<std::uint32_t>(rng.below(n));
    auto b = static_cast<std::uint32_t>(rng.below(n - 1));
    if (b >= a) ++b;
    inst.add({a, b}, hidden[a] * hidden[b]);
  }
  return inst;
}

}  // namespace

TEST_CASE("projected run counts") {
  CHECK(max_subset_size(10, 0.2) == 4);
  CHECK(projected_runs(10, 0.2) == std::optional<std::uint64_t>(4521));
  CHECK(binomial_sum(10, 4) == 4521);
  CHECK(projected_runs(12, 0.5) == std::optional<std::uint64_t>(531441));
  CHECK(projected_runs(10, 0.01) == std::optional<std::uint64_t>(1));
  for (std::size_t n = 1; n <= 20; ++n) {
    for (double eps : {0.05, 0.1, 0.25, 0.4, 0.5, 1.0}) {
      CHECK(projected_runs(n, eps) == std::optional<std::uint64_t>(binomial_sum(n, max_subset_size(n, eps))));
    }
  }
  CHECK_FALSE(projected_runs(200, 0.3).has_value());
  CHECK_THROWS_AS(projected_runs(10, 0.0), InputError);
}

TEST_CASE("floor of the subset size") {
  CHECK(max_subset_size(10, 0.3) == 6);
  CHECK(max_subset_size(10, 0.35) == 7);
  CHECK(max_subset_size(3, 0.1) == 0);
}

TEST_CASE("enumeration order and count") {
  std::vector<SubsetAdvice> seen;
  const SubsetSolver record = [&](const SubsetAdvice& a, std::uint64_t) {
    seen.push_back(a);
    return Assignment(a.num_vars);
  };
  KLinInstance inst(2, 3);
  inst.add({0, 1}, 1);
  const auto r = enumerate_solve(inst, 0.34, record, 1);
  CHECK(r.runs == 1 + 3 * 2 + 3 * 4);
  REQUIRE(seen.size() == 19);
  CHECK(seen[0].indices.empty());
  CHECK(seen[1].indices == std::vector<std::uint32_t>{0});
  CHECK(seen[1].values == std::vector<Spin>{1});
  CHECK(seen[2].values == std::vector<Spin>{-1});
  CHECK(seen[7].indices == std::vector<std::uint32_t>{0, 1});
  CHECK(seen[7].values == std::vector<Spin>{1, 1});
  CHECK(seen[8].values == std::vector<Spin>{1, -1});
  CHECK(seen[9].values == std::vector<Spin>{-1, 1});
  CHECK(seen[18].indices == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("single run when the size bound is zero") {
  std::size_t runs = 0;
  const SubsetSolver count = [&](const SubsetAdvice& a, std::uint64_t) {
    ++runs;
    CHECK(a.indices.empty());
    return Assignment(a.num_vars);
  };
  KLinInstance inst(2, 5);
  CHECK(enumerate_solve(inst, 0.05, count, 3).runs == 1);
  CHECK(runs == 1);
}

TEST_CASE("budget refusal") {
  const SubsetSolver never = [](const SubsetAdvice& a, std::uint64_t) { return Assignment(a.num_vars); };
  KLinInstance inst(2, 12);
  CHECK_THROWS_AS(enumerate_solve(inst, 0.5, never, 1, 1000), BudgetError);
  try {
    enumerate_solve(inst, 0.5, never, 1, 1000);
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("531441") != std::string::npos);
  }
  KLinInstance big(2, 200);
  CHECK_THROWS_AS(enumerate_solve(big, 0.3, never, 1), BudgetError);
}

TEST_CASE("returns the best inner output and dominates the true restriction") {
  const auto inst = satisfiable_2lin(8, 20, 4);
  const auto inner = via_label_advice([&](const LabelAdvice& adv) { return solve_2lin_with_advice(inst, adv).x; });
  const auto r = enumerate_solve(inst, 0.25, inner, 7);
  CHECK(r.value == oracle::brute_force_best(inst));
  CHECK(r.value == evaluate(inst, r.x).weight);
  CHECK(r.runs == *projected_runs(8, 0.25));
}

TEST_CASE("monotone in epsilon and deterministic") {
  CounterRng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    KLinInstance inst(2, 7);
    for (int c = 0; c < 15; ++c) {
      const auto a = static_cast<std::uint32_t>(rng.below(7));
      const auto b = static_cast<std::uint32_t>((a + 1 + rng.below(6)) % 7);
      inst.add({a, b}, rng.sign());
    }
    // A deliberately weak inner solver: labels only.
    const SubsetSolver weak = [](const SubsetAdvice& a, std::uint64_t) {
      std::vector<Spin> v(a.num_vars, 1);
      for (std::size_t r = 0; r < a.indices.size(); ++r) v[a.indices[r]] = a.values[r];
      return Assignment(v);
    };
    double last = -1;
    for (double eps : {0.05, 0.1, 0.15, 0.22, 0.3}) {
      const auto r = enumerate_solve(inst, eps, weak, 5);
      CHECK(r.value >= last);
      last = r.value;
      const auto again = enumerate_solve(inst, eps, weak, 5);
      CHECK(again.ordinal == r.ordinal);
      CHECK(again.x == r.x);
    }
  }
}

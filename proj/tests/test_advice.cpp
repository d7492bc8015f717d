#include <doctest.h>

#include <cmath>

#include "advcsp/advice.hpp"
#include "advcsp/errors.hpp"
#include "advcsp/rng.hpp"

using namespace advcsp;

namespace {

Assignment random_assignment(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Spin> v(n);
  for (auto& x : v) x = static_cast<Spin>(rng.sign());
  return Assignment(std::move(v));
}

double agreement(const Assignment& a, const Assignment& b) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace

TEST_CASE("epsilon range") {
  const Assignment x(4);
  CHECK_THROWS_AS(gen_label_advice(x, 0.0, 1), InputError);
  CHECK_THROWS_AS(gen_label_advice(x, 1.5, 1), InputError);
  CHECK_THROWS_AS(gen_subset_advice(x, -0.1, 1), InputError);
  CHECK_NOTHROW(gen_label_advice(x, 1.0, 1));
}

TEST_CASE("noiseless advice") {
  const auto x = random_assignment(100, 3);
  CHECK(gen_label_advice(x, 1.0, 5).values == x);
  const auto s = gen_subset_advice(x, 1.0, 5);
  CHECK(s.indices.size() == 100);
  for (std::size_t r = 0; r < s.indices.size(); ++r) CHECK(s.values[r] == x[s.indices[r]]);
  const auto full = subset_to_label(s, 9);
  CHECK(full.values == x);
  CHECK(full.epsilon == 1.0);
}

TEST_CASE("advice is deterministic per seed") {
  const auto x = random_assignment(500, 4);
  CHECK(gen_label_advice(x, 0.3, 11) == gen_label_advice(x, 0.3, 11));
  CHECK(gen_subset_advice(x, 0.3, 11) == gen_subset_advice(x, 0.3, 11));
  CHECK_FALSE(gen_label_advice(x, 0.3, 11) == gen_label_advice(x, 0.3, 12));
}

TEST_CASE("label advice correlation band") {
  const std::size_t n = 10000;
  const auto x = random_assignment(n, 1);
  const auto adv = gen_label_advice(x, 0.4, 2);
  const double eps_hat = empirical_correlation(adv, x);
  CHECK(std::abs(eps_hat - 0.4) <= 0.03);
  CHECK(empirical_correlation(LabelAdvice{x, 1.0}, x) == 1.0);
  CHECK(empirical_correlation(LabelAdvice{x.negated(), 1.0}, x) == -1.0);
  CHECK_THROWS_AS(empirical_correlation(LabelAdvice{Assignment(3), 1.0}, x), InputError);
}

TEST_CASE("subset advice inclusion rate") {
  const std::size_t n = 10000;
  const auto x = random_assignment(n, 1);
  const auto s = gen_subset_advice(x, 0.3, 8);
  CHECK_NOTHROW(validate(s));
  const double rate = static_cast<double>(s.indices.size()) / n;
  CHECK(std::abs(rate - 0.3) <= 3 * std::sqrt(0.3 * 0.7 / n));
}

TEST_CASE("empty subset gives uniform labels") {
  const std::size_t n = 10000;
  const auto x = random_assignment(n, 2);
  const auto lab = subset_to_label(SubsetAdvice{n, {}, {}, 0.5}, 17);
  CHECK(std::abs(agreement(lab.values, x) - 0.5) <= 0.015);
  CHECK(lab.epsilon == 0.5);
}

TEST_CASE("converted subset advice agrees at (1+eps)/2") {
  // Monte Carlo over 10^5 independent per-coordinate resamples.
  const std::size_t n = 1000;
  const auto x = random_assignment(n, 3);
  std::size_t same = 0, total = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto s = gen_subset_advice(x, 0.3, derive_seed(50, r));
    const auto lab = subset_to_label(s, derive_seed(60, r));
    for (std::size_t i = 0; i < n; ++i) same += lab.values[i] == x[i];
    total += n;
  }
  CHECK(std::abs(static_cast<double>(same) / total - 0.65) <= 0.005);
}

TEST_CASE("per-coordinate agreement across seeds") {
  const std::size_t n = 50, draws = 4000;
  const auto x = random_assignment(n, 6);
  std::vector<double> sum(n, 0.0);
  for (std::uint64_t r = 0; r < draws; ++r) {
    const auto adv = gen_label_advice(x, 0.3, derive_seed(70, r));
    for (std::size_t i = 0; i < n; ++i) sum[i] += adv.values[i] * x[i];
  }
  // Each product has mean eps and variance 1 - eps^2; 4 sigma keeps the 50-way family tight.
  const double band = 4.0 * std::sqrt((1 - 0.09) / draws);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(sum[i] / draws - 0.3) <= band);
}

TEST_CASE("subset validation") {
  CHECK_THROWS_AS(validate(SubsetAdvice{4, {2, 1}, {1, 1}, 0.5}), InputError);
  CHECK_THROWS_AS(validate(SubsetAdvice{4, {1, 1}, {1, 1}, 0.5}), InputError);
  CHECK_THROWS_AS(validate(SubsetAdvice{4, {4}, {1}, 0.5}), InputError);
  CHECK_THROWS_AS(validate(SubsetAdvice{4, {1}, {1, -1}, 0.5}), InputError);
  CHECK_THROWS_AS(validate(SubsetAdvice{4, {1}, {0}, 0.5}), InputError);
}

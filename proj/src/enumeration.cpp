#include "advcsp/enumeration.hpp"

#include <cmath>
#include <string>

#include "advcsp/errors.hpp"
#include "advcsp/rng.hpp"

namespace advcsp {

std::size_t max_subset_size(std::size_t n, double epsilon) {
  check_epsilon(epsilon);
  const double s = std::floor(2.0 * epsilon * static_cast<double>(n) + 1e-9);
  return s >= static_cast<double>(n) ? n : static_cast<std::size_t>(s);
}

std::optional<std::uint64_t> projected_runs(std::size_t n, double epsilon) {
  using u128 = unsigned __int128;
  const u128 limit = static_cast<u128>(1) << 63;
  const std::size_t top = max_subset_size(n, epsilon);
  u128 binom = 1;  // C(n, s)
  u128 total = 0;
  for (std::size_t s = 0; s <= top; ++s) {
    if (s > 0) {
      // C(n, s) = C(n, s-1) (n - s + 1) / s is exact; C(n, s-1) <= 2^63 keeps it in range.
      binom = binom * (n - s + 1) / s;
    }
    if (s >= 63 || binom > limit) return std::nullopt;
    total += binom << s;
    if (total > limit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(total);
}

SubsetSolver via_label_advice(LabelSolver solver) {
  return [solver = std::move(solver)](const SubsetAdvice& advice, std::uint64_t seed) {
    return solver(subset_to_label(advice, seed));
  };
}

EnumerationResult enumerate_solve(const KLinInstance& instance, double epsilon, const SubsetSolver& inner,
                                  std::uint64_t seed, std::uint64_t cap) {
  const std::size_t n = instance.num_vars();
  const auto projected = projected_runs(n, epsilon);
  if (!projected || *projected > cap) {
    throw BudgetError("enumeration needs " + (projected ? std::to_string(*projected) : std::string("over 2^63")) +
                      " runs, cap is " + std::to_string(cap));
  }
  const std::size_t top = max_subset_size(n, epsilon);

  EnumerationResult best;
  bool have = false;
  SubsetAdvice advice;
  advice.num_vars = n;
  advice.epsilon = epsilon;
  std::uint64_t ordinal = 0;
  for (std::size_t s = 0; s <= top; ++s) {
    std::vector<std::uint32_t> subset(s);
    for (std::size_t r = 0; r < s; ++r) subset[r] = static_cast<std::uint32_t>(r);
    while (true) {
      advice.indices = subset;
      advice.values.assign(s, 1);
      for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << s); ++pattern) {
        // Bit r of the pattern (from the most significant end) marks a -1 at subset[r].
        for (std::size_t r = 0; r < s; ++r) advice.values[r] = (pattern >> (s - 1 - r)) & 1 ? -1 : 1;
        Assignment x = inner(advice, derive_seed(seed, ordinal));
        if (x.size() != n) throw InputError("inner solver returned an assignment of the wrong length");
        const double v = evaluate(instance, x).weight;
        if (!have || v > best.value) {
          have = true;
          best.x = std::move(x);
          best.value = v;
          best.advice = advice;
          best.ordinal = ordinal;
        }
        ++ordinal;
      }
      // Next s-subset of [0, n) in lexicographic order.
      std::size_t r = s;
      while (r > 0 && subset[r - 1] == n - s + r - 1) --r;
      if (r == 0) break;
      ++subset[r - 1];
      for (std::size_t q = r; q < s; ++q) subset[q] = subset[q - 1] + 1;
    }
  }
  best.runs = ordinal;
  if (best.runs != *projected) throw ConsistencyError("enumeration count differs from the projection");
  return best;
}

}  // namespace advcsp

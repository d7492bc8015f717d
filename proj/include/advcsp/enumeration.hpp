#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "advcsp/advice.hpp"
#include "advcsp/instance.hpp"

namespace advcsp {

inline constexpr std::uint64_t kDefaultRunCap = 10'000'000;

/// floor(2 epsilon n), clipped to n.
std::size_t max_subset_size(std::size_t n, double epsilon);

/// sum_{s <= floor(2 epsilon n)} C(n, s) 2^s, or nullopt once it exceeds 2^63.
std::optional<std::uint64_t> projected_runs(std::size_t n, double epsilon);

/// An advice-consuming solver. `seed` is derived from the master seed and the
/// ordinal of the advice in enumeration order.
using SubsetSolver = std::function<Assignment(const SubsetAdvice&, std::uint64_t seed)>;
using LabelSolver = std::function<Assignment(const LabelAdvice&)>;

/// Wraps a label-advice solver: the subset advice is completed with
/// subset_to_label under the supplied seed.
SubsetSolver via_label_advice(LabelSolver solver);

struct EnumerationResult {
  Assignment x;
  double value = 0.0;
  SubsetAdvice advice;       // the advice that produced x
  std::uint64_t ordinal = 0;
  std::uint64_t runs = 0;
};

/// Runs `inner` on every subset of size <= floor(2 epsilon n) (sizes ascending,
/// subsets in lexicographic order) with every sign pattern, and keeps the best
/// assignment by evaluate; ties go to the earliest ordinal. Throws BudgetError,
/// without running anything, when the projected count exceeds `cap`.
EnumerationResult enumerate_solve(const KLinInstance& instance, double epsilon, const SubsetSolver& inner,
                                  std::uint64_t seed, std::uint64_t cap = kDefaultRunCap);

}  // namespace advcsp

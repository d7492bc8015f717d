#pragma once

#include <cstdint>
#include <vector>

#include "advcsp/instance.hpp"

namespace advcsp {

// Noisy label advice: each coordinate agrees with the ground truth with
// probability (1 + epsilon) / 2, independently.
struct LabelAdvice {
  Assignment values;
  double epsilon = 1.0;

  friend bool operator==(const LabelAdvice&, const LabelAdvice&) = default;
};

// Exact ground-truth values on a random index subset (each index included
// with probability epsilon).
struct SubsetAdvice {
  std::size_t num_vars = 0;
  std::vector<std::uint32_t> indices;  // sorted, distinct
  std::vector<Spin> values;            // values[r] is the label of indices[r]
  double epsilon = 1.0;

  friend bool operator==(const SubsetAdvice&, const SubsetAdvice&) = default;
};

// Throws InputError unless epsilon lies in (0, 1].
void check_epsilon(double epsilon);

// Throws InputError when indices are unsorted, repeated, out of range, or
// values are not ±1 / misaligned.
void validate(const SubsetAdvice& advice);

LabelAdvice gen_label_advice(const Assignment& x_star, double epsilon, std::uint64_t seed);

SubsetAdvice gen_subset_advice(const Assignment& x_star, double epsilon, std::uint64_t seed);

// Revealed coordinates are copied, the rest are uniform; the induced per-coordinate
// agreement is (1 + epsilon) / 2, so epsilon carries over unchanged.
LabelAdvice subset_to_label(const SubsetAdvice& advice, std::uint64_t seed);

// (1/n) sum_i advice_i * x_star_i.
double empirical_correlation(const LabelAdvice& advice, const Assignment& x_star);

}  // namespace advcsp

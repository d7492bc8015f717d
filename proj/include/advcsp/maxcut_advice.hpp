#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "advcsp/advice.hpp"
#include "advcsp/instance.hpp"
#include "advcsp/lp.hpp"

namespace advcsp {

struct MaxCutParams {
  double c1 = 20.0;  // confidence threshold coefficient
  double c2 = 30.0;  // LP slack coefficient

  static MaxCutParams asymptotic_defaults() { return {20.0, 30.0}; }
  static MaxCutParams bench_preset() { return {1.0, 1.5}; }

  /// c1 * sqrt(d ln n).
  double threshold(std::size_t d, std::size_t n) const;
  /// c2 * sqrt(d ln n) / epsilon.
  double slack(std::size_t d, std::size_t n, double epsilon) const;
};

void validate(const MaxCutParams& params);

struct LandscapeSplit {
  std::vector<long long> delta;
  double threshold = 0.0;
  std::vector<std::uint32_t> confident;  // V_L
  std::vector<std::uint32_t> s_side;     // S_L: confident with delta <= 0
  std::vector<std::uint32_t> t_side;     // T_L
  std::vector<std::uint32_t> uncertain;  // Q
};

/// Per-vertex edge counts towards S_L and T_L.
struct SideDegrees {
  std::vector<long long> to_s;
  std::vector<long long> to_t;
};

struct CutDiagnostics {
  double threshold = 0.0;
  double slack = 0.0;           // delta of the LP ranges
  bool lp_feasible = true;
  bool fallback = false;        // Q assigned by sign of Delta after an infeasible LP
  double lp_value = 0.0;
  double expected_f = 0.0;      // sum_Q theta d_T + (1 - theta) d_S
  long long f_value = 0;        // F(y)
  std::vector<double> theta;    // aligned with LandscapeSplit::uncertain
  std::vector<long long> d_s;   // aligned with uncertain
  std::vector<long long> d_t;
  std::vector<long long> d_out;
  std::size_t balance_violations = 0;  // Q vertices with a side above d/2 + 2 delta
  long long q_cut_direct = 0;          // |E[Q∩S,T_L]| + |E[Q∩T,S_L]| + |E[Q∩S,Q∩T]|
  long long q_cut_twice_identity = 0;  // F(y) + sum_Q d_out, equal to 2 * q_cut_direct
};

struct MaxCutResult {
  Assignment side;  // +1 for S, -1 for T
  double cut_weight = 0.0;
  LandscapeSplit split;
  CutDiagnostics diagnostics;
};

/// Delta_i = sum over neighbours j of the advice label of j.
std::vector<long long> compute_deltas(const GraphInstance& graph, const LabelAdvice& advice);

LandscapeSplit split_vertices(std::vector<long long> delta, std::size_t d, std::size_t n, const MaxCutParams& params);

SideDegrees side_degrees(const GraphInstance& graph, const LandscapeSplit& split);

/// Balancing LP over theta_i in [0, 1] for i in Q (variable r is uncertain[r]).
/// Throws InputError for a non-regular graph.
LinearProgram build_lp(const GraphInstance& graph, const LandscapeSplit& split, std::size_t d, double epsilon,
                       const MaxCutParams& params);

/// Optimum of `lp` that is closest to theta = 1/2 in l1 among all optima, or
/// nullopt when infeasible. The second stage keeps the rounding from
/// collapsing every uncertain vertex onto one side when the LP has a face of
/// optima.
struct BalancedOptimum {
  std::vector<double> theta;
  double value = 0.0;
};
std::optional<BalancedOptimum> solve_balanced(const LinearProgram& lp);

/// Independent Bernoulli(theta_i) draws. Entries may overshoot [0, 1] by at
/// most 1e-9 (clamped); larger excursions throw InputError.
std::vector<std::uint8_t> round_lp(const std::vector<double>& theta, std::uint64_t seed);

MaxCutResult solve_maxcut_with_advice(const GraphInstance& graph, const LabelAdvice& advice,
                                      const MaxCutParams& params, std::uint64_t seed);

}  // namespace advcsp

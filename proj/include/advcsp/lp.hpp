#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

namespace advcsp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// lower <= sum_j coeff_j * x_j <= upper; either side may be infinite.
struct LpRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double lower = -kInf;
  double upper = kInf;
};

// maximize objective . x + objective_offset
// subject to every row range and var_lower <= x <= var_upper.
struct LinearProgram {
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<double> var_lower;
  std::vector<double> var_upper;
  std::vector<LpRow> rows;

  explicit LinearProgram(std::size_t num_vars = 0, double lo = 0.0, double hi = kInf)
      : objective(num_vars, 0.0), var_lower(num_vars, lo), var_upper(num_vars, hi) {}

  std::size_t num_vars() const { return objective.size(); }
  std::size_t add_var(double cost, double lo, double hi);
  void add_row(std::vector<std::pair<std::size_t, double>> terms, double lower, double upper);
};

struct LpOptimal {
  std::vector<double> point;
  double value = 0.0;
  std::size_t iterations = 0;
};
struct LpInfeasible {};
struct LpUnbounded {};

using LpOutcome = std::variant<LpOptimal, LpInfeasible, LpUnbounded>;

// Feasibility tolerance used for phase-one termination and redundancy checks.
inline constexpr double kLpFeasTol = 1e-7;

/// Throws InputError on NaN data, inverted ranges, or out-of-range indices.
void validate(const LinearProgram& lp);

/// Two-phase dense bounded-variable primal simplex. Ranged rows are expanded
/// into at most two inequalities (sides implied by the variable box are
/// dropped first). Pricing is Dantzig's rule, switching to Bland's rule after
/// a run of degenerate pivots. Deterministic.
LpOutcome solve_lp(const LinearProgram& lp);

/// Largest absolute violation of any row or bound at `point`.
double max_violation(const LinearProgram& lp, const std::vector<double>& point);

double objective_value(const LinearProgram& lp, const std::vector<double>& point);

}  // namespace advcsp

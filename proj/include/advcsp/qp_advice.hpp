#pragma once

#include <span>
#include <vector>

#include "advcsp/advice.hpp"
#include "advcsp/instance.hpp"

namespace advcsp {

/// F(x, y) = <x, A y> - || A (epsilon x - y) ||_1.
double advice_objective(const QpMatrix& a, std::span<const double> x, const Assignment& y, double epsilon);

/// Maximizer of F(., y) over [-1, 1]^n, found as the LP
///   max <x, A y> - sum_r s_r  s.t.  s_r >= +-(A (epsilon x - y))_r,  s >= 0.
/// Throws ConsistencyError if the LP solver reports anything but an optimum.
std::vector<double> maximize_concave(const QpMatrix& a, const Assignment& y, double epsilon);

/// Rounds coordinates in ascending order to the endpoint that does not
/// decrease <x, A x> (ties to +1). Requires every x_i in [-1, 1].
Assignment greedy_round(const QpMatrix& a, std::span<const double> x);

struct QpResult {
  Assignment x;
  double value = 0.0;                  // <x', A x'>
  std::vector<double> fractional;      // optimizer of F
  double fractional_objective = 0.0;   // F at the optimizer
};

QpResult solve_qp_with_advice(const QpMatrix& a, const LabelAdvice& advice);

struct TwoLinResult {
  Assignment x;
  double weight = 0.0;     // satisfied weight via the quadratic identity
  double fraction = 0.0;
  double guarantee = 0.0;  // reference_value - sqrt(n sum w^2) / epsilon
};

/// Max 2-Lin through the quadratic form. `reference_value` stands in for the
/// unknown optimum in the reported guarantee (pass the planted value when
/// known). Throws ConsistencyError if the identity and a direct recount
/// disagree by more than 1e-6.
TwoLinResult solve_2lin_with_advice(const KLinInstance& instance, const LabelAdvice& advice,
                                    double reference_value = 0.0);

}  // namespace advcsp

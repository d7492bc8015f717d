#pragma once

#include "advcsp/instance.hpp"

namespace advcsp {

/// 4-Lin instance on n + t variables. New variable y_r (r = 0..t-1) has index n + r.
struct FourLinLift {
  KLinInstance instance;
  std::size_t base_vars = 0;
  std::size_t copies = 0;  // t
};

/// For each x_i x_j x_k = c and each r, emits x_i x_j x_k y_r = c with the
/// source weight. Constraint r * m + c is copy r of source c.
FourLinLift three_to_four_lin(const KLinInstance& phi, std::size_t t);

/// Appends t coordinates equal to +1.
Assignment lift_assignment(const Assignment& sigma, std::size_t t);

struct Projection {
  Assignment x;
  std::size_t copy = 0;  // the r that won; ties to the lowest
  double weight = 0.0;   // satisfied weight on phi
};

/// Tries sigma_r(x_i) = sigma'(x_i) sigma'(y_r) for every r and keeps the best on phi.
Projection project_assignment(const Assignment& sigma_prime, const KLinInstance& phi);

}  // namespace advcsp

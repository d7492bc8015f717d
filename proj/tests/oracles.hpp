#pragma once

// Independent reference computations used by the tests. Deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "advcsp/instance.hpp"
#include "advcsp/lp.hpp"

namespace oracle {

inline advcsp::Assignment from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<advcsp::Spin> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? -1 : 1;
  return advcsp::Assignment(std::move(v));
}

// Satisfied weight by multiplying the spins of each constraint directly.
inline double recount(const advcsp::KLinInstance& inst, const advcsp::Assignment& x) {
  double w = 0.0;
  for (std::size_t c = 0; c < inst.num_constraints(); ++c) {
    int prod = 1;
    for (auto v : inst.vars(c)) prod *= x[v];
    if (prod == inst.rhs(c)) w += inst.weight(c);
  }
  return w;
}

inline double brute_force_best(const advcsp::KLinInstance& inst) {
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.num_vars()); ++mask) {
    best = std::max(best, recount(inst, from_mask(inst.num_vars(), mask)));
  }
  return best;
}

inline double form(const advcsp::QpMatrix& a, const advcsp::Assignment& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * x[i] * x[j];
  }
  return s;
}

inline double brute_force_form(const advcsp::QpMatrix& a) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.size()); ++mask) {
    best = std::max(best, form(a, from_mask(a.size(), mask)));
  }
  return best;
}

// Solves the square system m x = rhs by Gaussian elimination with partial
// pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs) {
  const std::size_t p = rhs.size();
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) < 1e-10) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < p; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(p);
  for (std::size_t r = 0; r < p; ++r) x[r] = rhs[r] / m[r][r];
  return x;
}

// Best objective over all basic feasible points of a box-bounded LP: every
// choice of p tight hyperplanes among the bounds and row sides. nullopt when
// no basic point is feasible (the polytope is then empty).
inline std::optional<double> lp_vertex_optimum(const advcsp::LinearProgram& lp, double tol = 1e-7) {
  const std::size_t p = lp.num_vars();
  std::vector<std::vector<double>> planes;
  std::vector<double> values;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> e(p, 0.0);
    e[j] = 1.0;
    planes.push_back(e);
    values.push_back(lp.var_lower[j]);
    planes.push_back(e);
    values.push_back(lp.var_upper[j]);
  }
  for (const auto& row : lp.rows) {
    std::vector<double> a(p, 0.0);
    for (const auto& [j, v] : row.terms) a[j] += v;
    if (std::isfinite(row.lower)) {
      planes.push_back(a);
      values.push_back(row.lower);
    }
    if (std::isfinite(row.upper)) {
      planes.push_back(a);
      values.push_back(row.upper);
    }
  }
  std::optional<double> best;
  std::vector<std::size_t> pick(p);
  for (std::size_t r = 0; r < p; ++r) pick[r] = r;
  const std::size_t total = planes.size();
  while (true) {
    std::vector<std::vector<double>> m;
    std::vector<double> rhs;
    for (auto k : pick) {
      m.push_back(planes[k]);
      rhs.push_back(values[k]);
    }
    if (auto x = solve_square(m, rhs); x && advcsp::max_violation(lp, *x) <= tol) {
      const double v = advcsp::objective_value(lp, *x);
      if (!best || v > *best) best = v;
    }
    std::size_t r = p;
    while (r > 0 && pick[r - 1] == total - p + r - 1) --r;
    if (r == 0) break;
    ++pick[r - 1];
    for (std::size_t q = r; q < p; ++q) pick[q] = pick[q - 1] + 1;
  }
  return best;
}

}  // namespace oracle

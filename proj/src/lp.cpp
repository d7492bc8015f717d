#include "advcsp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "advcsp/errors.hpp"

namespace advcsp {

std::size_t LinearProgram::add_var(double cost, double lo, double hi) {
  objective.push_back(cost);
  var_lower.push_back(lo);
  var_upper.push_back(hi);
  return objective.size() - 1;
}

void LinearProgram::add_row(std::vector<std::pair<std::size_t, double>> terms, double lower, double upper) {
  rows.push_back(LpRow{std::move(terms), lower, upper});
}

void validate(const LinearProgram& lp) {
  const std::size_t p = lp.num_vars();
  if (lp.var_lower.size() != p || lp.var_upper.size() != p) throw InputError("bound vectors must match the variable count");
  if (std::isnan(lp.objective_offset)) throw InputError("objective offset is NaN");
  for (std::size_t j = 0; j < p; ++j) {
    if (!std::isfinite(lp.objective[j])) throw InputError("objective coefficient " + std::to_string(j) + " is not finite");
    if (std::isnan(lp.var_lower[j]) || std::isnan(lp.var_upper[j])) throw InputError("variable bound is NaN");
    if (lp.var_lower[j] > lp.var_upper[j]) throw InputError("variable " + std::to_string(j) + " has lower > upper");
    if (lp.var_lower[j] == kInf || lp.var_upper[j] == -kInf) throw InputError("variable box is empty");
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    if (std::isnan(row.lower) || std::isnan(row.upper)) throw InputError("row " + std::to_string(r) + " range is NaN");
    if (row.lower > row.upper) throw InputError("row " + std::to_string(r) + " has lower > upper");
    for (const auto& [j, a] : row.terms) {
      if (j >= p) throw InputError("row " + std::to_string(r) + " references a missing variable");
      if (!std::isfinite(a)) throw InputError("row " + std::to_string(r) + " has a non-finite coefficient");
    }
  }
}

double objective_value(const LinearProgram& lp, const std::vector<double>& point) {
  double v = lp.objective_offset;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) v += lp.objective[j] * point[j];
  return v;
}

double max_violation(const LinearProgram& lp, const std::vector<double>& point) {
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    worst = std::max({worst, lp.var_lower[j] - point[j], point[j] - lp.var_upper[j]});
  }
  for (const auto& row : lp.rows) {
    double act = 0.0;
    for (const auto& [j, a] : row.terms) act += a * point[j];
    worst = std::max({worst, row.lower - act, act - row.upper});
  }
  return worst;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr int kDegenerateRunBeforeBland = 20;

enum class Status : unsigned char { Basic, AtLower, AtUpper };

// Every original variable becomes x = offset + sum(sign * z_col) over one or
// two nonnegative columns.
struct VarMap {
  double offset = 0.0;
  std::size_t col = 0;
  double sign = 1.0;
  std::size_t col2 = static_cast<std::size_t>(-1);  // set for free variables (x = z1 - z2)
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), t_(rows * cols, 0.0), beta_(rows, 0.0), basis_(rows, 0), status_(cols, Status::AtLower),
        upper_(cols, kInf) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * n_ + j]; }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<double>& beta() { return beta_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<Status>& status() { return status_; }
  std::vector<double>& upper() { return upper_; }

  enum class Result { Optimal, Unbounded };

  // Maximizes cost . z from the current basic feasible solution.
  Result maximize(const std::vector<double>& cost, std::size_t& iterations, std::size_t limit) {
    std::vector<double> d(cost);
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) d[j] -= cb * row[j];
    }
    for (std::size_t i = 0; i < m_; ++i) d[basis_[i]] = 0.0;

    int degenerate_run = 0;
    while (true) {
      const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
      std::size_t q = n_;
      double best = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (status_[j] == Status::Basic || upper_[j] <= 0.0) continue;
        const double dj = d[j];
        const bool eligible = (status_[j] == Status::AtLower && dj > kCostTol) ||
                              (status_[j] == Status::AtUpper && dj < -kCostTol);
        if (!eligible) continue;
        if (bland) {
          q = j;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
        }
      }
      if (q == n_) return Result::Optimal;
      if (++iterations > limit) throw ConsistencyError("simplex iteration limit exceeded");

      const double dir = status_[q] == Status::AtLower ? 1.0 : -1.0;
      double theta = upper_[q];
      std::size_t leave = m_;
      double leave_alpha = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = dir * at(i, q);
        double limit_i;
        if (alpha > kPivotTol) {
          limit_i = std::max(beta_[i], 0.0) / alpha;
        } else if (alpha < -kPivotTol && upper_[basis_[i]] < kInf) {
          limit_i = std::max(upper_[basis_[i]] - beta_[i], 0.0) / -alpha;
        } else {
          continue;
        }
        bool take = false;
        if (limit_i < theta - 1e-12) {
          take = true;
        } else if (limit_i <= theta + 1e-12 && leave != m_) {
          take = bland ? basis_[i] < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          theta = std::min(theta, limit_i);
          leave = i;
          leave_alpha = alpha;
        }
      }
      if (theta == kInf) return Result::Unbounded;
      degenerate_run = theta > 1e-12 ? 0 : degenerate_run + 1;

      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, q);
        if (a != 0.0) beta_[i] -= dir * a * theta;
      }
      if (leave == m_) {
        status_[q] = status_[q] == Status::AtLower ? Status::AtUpper : Status::AtLower;
        continue;
      }
      const double entering_value = dir > 0 ? theta : upper_[q] - theta;
      const std::size_t out = basis_[leave];
      status_[out] = leave_alpha > 0 ? Status::AtLower : Status::AtUpper;
      pivot(leave, q, d);
      basis_[leave] = q;
      status_[q] = Status::Basic;
      beta_[leave] = entering_value;
    }
  }

  double value_of(std::size_t j) const {
    switch (status_[j]) {
      case Status::AtLower:
        return 0.0;
      case Status::AtUpper:
        return upper_[j];
      case Status::Basic:
        break;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] == j) return beta_[i];
    }
    return 0.0;
  }

 private:
  void pivot(std::size_t r, std::size_t q, std::vector<double>& d) {
    double* prow = &t_[r * n_];
    const double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < n_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * n_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double f = d[q];
    if (f != 0.0) {
      for (std::size_t j = 0; j < n_; ++j) d[j] -= f * prow[j];
      d[q] = 0.0;
    }
  }

  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<double> beta_;
  std::vector<std::size_t> basis_;
  std::vector<Status> status_;
  std::vector<double> upper_;
};

struct Inequality {
  std::vector<std::pair<std::size_t, double>> terms;  // over z columns
  double rhs;                                         // terms . z <= rhs
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp) {
  validate(lp);
  const std::size_t p = lp.num_vars();

  std::vector<VarMap> map(p);
  std::vector<double> col_upper;
  for (std::size_t j = 0; j < p; ++j) {
    const double lo = lp.var_lower[j], hi = lp.var_upper[j];
    VarMap& vm = map[j];
    if (lo > -kInf) {
      vm = {lo, col_upper.size(), 1.0};
      col_upper.push_back(hi - lo);
    } else if (hi < kInf) {
      vm = {hi, col_upper.size(), -1.0};
      col_upper.push_back(kInf);
    } else {
      vm = {0.0, col_upper.size(), 1.0, col_upper.size() + 1};
      col_upper.push_back(kInf);
      col_upper.push_back(kInf);
    }
  }
  const std::size_t nz = col_upper.size();

  // Rewrites a row over z columns and keeps only the sides not implied by the box.
  std::vector<Inequality> ineqs;
  for (const auto& row : lp.rows) {
    std::vector<double> dense(nz, 0.0);
    double constant = 0.0;
    for (const auto& [j, a] : row.terms) {
      const VarMap& vm = map[j];
      constant += a * vm.offset;
      dense[vm.col] += a * vm.sign;
      if (vm.col2 != static_cast<std::size_t>(-1)) dense[vm.col2] -= a;
    }
    std::vector<std::pair<std::size_t, double>> terms;
    double max_act = 0.0, min_act = 0.0;
    for (std::size_t c = 0; c < nz; ++c) {
      const double a = dense[c];
      if (a == 0.0) continue;
      terms.emplace_back(c, a);
      if (a > 0) {
        max_act += a * col_upper[c];
      } else {
        min_act += a * col_upper[c];
      }
    }
    const double upper = row.upper - constant;
    const double lower = row.lower - constant;
    if (terms.empty()) {
      if (lower > kLpFeasTol || upper < -kLpFeasTol) return LpInfeasible{};
      continue;
    }
    if (upper < kInf && !(max_act <= upper)) ineqs.push_back({terms, upper});
    if (lower > -kInf && !(min_act >= lower)) {
      auto neg = terms;
      for (auto& t : neg) t.second = -t.second;
      ineqs.push_back({std::move(neg), -lower});
    }
  }

  const std::size_t m = ineqs.size();
  std::size_t n_art = 0;
  for (const auto& q : ineqs) n_art += q.rhs < 0.0;
  const std::size_t slack0 = nz, art0 = nz + m, ncols = nz + m + n_art;

  Tableau tab(m, ncols);
  for (std::size_t c = 0; c < nz; ++c) tab.upper()[c] = col_upper[c];
  std::size_t next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& q = ineqs[i];
    const double s = q.rhs < 0.0 ? -1.0 : 1.0;
    for (const auto& [c, a] : q.terms) tab.at(i, c) = s * a;
    tab.at(i, slack0 + i) = s;
    tab.beta()[i] = s * q.rhs;
    if (s < 0.0) {
      tab.at(i, next_art) = 1.0;
      tab.basis()[i] = next_art;
      tab.status()[next_art] = Status::Basic;
      ++next_art;
    } else {
      tab.basis()[i] = slack0 + i;
      tab.status()[slack0 + i] = Status::Basic;
    }
  }
  // Columns whose box is [0, 0] never move.
  const std::size_t limit = 200 * (m + ncols) + 10000;
  std::size_t iterations = 0;

  if (n_art > 0) {
    std::vector<double> phase1(ncols, 0.0);
    for (std::size_t c = art0; c < ncols; ++c) phase1[c] = -1.0;
    tab.maximize(phase1, iterations, limit);
    double infeasibility = 0.0;
    double scale = 1.0;
    for (const auto& q : ineqs) scale = std::max(scale, std::abs(q.rhs));
    for (std::size_t c = art0; c < ncols; ++c) infeasibility += tab.value_of(c);
    if (infeasibility > kLpFeasTol * scale) return LpInfeasible{};
    for (std::size_t c = art0; c < ncols; ++c) tab.upper()[c] = 0.0;
  }

  std::vector<double> cost(ncols, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const VarMap& vm = map[j];
    cost[vm.col] += lp.objective[j] * vm.sign;
    if (vm.col2 != static_cast<std::size_t>(-1)) cost[vm.col2] -= lp.objective[j];
  }
  if (tab.maximize(cost, iterations, limit) == Tableau::Result::Unbounded) return LpUnbounded{};

  std::vector<double> z(nz, 0.0);
  for (std::size_t c = 0; c < nz; ++c) z[c] = tab.value_of(c);
  LpOptimal out;
  out.point.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const VarMap& vm = map[j];
    double x = vm.offset + vm.sign * z[vm.col];
    if (vm.col2 != static_cast<std::size_t>(-1)) x -= z[vm.col2];
    out.point[j] = std::clamp(x, lp.var_lower[j], lp.var_upper[j]);
  }
  out.value = objective_value(lp, out.point);
  out.iterations = iterations;
  return out;
}

}  // namespace advcsp

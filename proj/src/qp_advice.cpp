#include "advcsp/qp_advice.hpp"

#include <cmath>
#include <string>
#include <variant>

#include "advcsp/errors.hpp"
#include "advcsp/lp.hpp"

namespace advcsp {

namespace {

void check_dims(const QpMatrix& a, std::size_t n, const char* what) {
  if (a.size() != n) {
    throw InputError(std::string(what) + " has length " + std::to_string(n) + ", matrix has size " +
                     std::to_string(a.size()));
  }
}

std::vector<double> times(const QpMatrix& a, const Assignment& y) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * y[j];
    out[i] = s;
  }
  return out;
}

}  // namespace

double advice_objective(const QpMatrix& a, std::span<const double> x, const Assignment& y, double epsilon) {
  check_dims(a, x.size(), "x");
  check_dims(a, y.size(), "y");
  check_epsilon(epsilon);
  const std::size_t n = a.size();
  double inner = 0.0, penalty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = a.row(i);
    double ay = 0.0, az = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      ay += row[j] * y[j];
      az += row[j] * (epsilon * x[j] - y[j]);
    }
    inner += x[i] * ay;
    penalty += std::abs(az);
  }
  return inner - penalty;
}

std::vector<double> maximize_concave(const QpMatrix& a, const Assignment& y, double epsilon) {
  check_dims(a, y.size(), "advice");
  check_epsilon(epsilon);
  const std::size_t n = a.size();
  const std::vector<double> ay = times(a, y);

  LinearProgram lp(n, -1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) lp.objective[i] = ay[i];
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = a.row(r);
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] != 0.0) terms.emplace_back(j, epsilon * row[j]);
    }
    if (terms.empty()) continue;  // row r of A is zero, so its penalty term is zero
    const std::size_t s = lp.add_var(-1.0, 0.0, kInf);
    // s - eps (Ax)_r >= -(Ay)_r  and  s + eps (Ax)_r >= (Ay)_r
    auto lower = terms;
    for (auto& t : lower) t.second = -t.second;
    lower.emplace_back(s, 1.0);
    lp.add_row(std::move(lower), -ay[r], kInf);
    terms.emplace_back(s, 1.0);
    lp.add_row(std::move(terms), ay[r], kInf);
  }
  const LpOutcome outcome = solve_lp(lp);
  const auto* opt = std::get_if<LpOptimal>(&outcome);
  if (!opt) throw ConsistencyError("concave program LP did not reach an optimum");
  return std::vector<double>(opt->point.begin(), opt->point.begin() + static_cast<std::ptrdiff_t>(n));
}

Assignment greedy_round(const QpMatrix& a, std::span<const double> x) {
  check_dims(a, x.size(), "x");
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) throw InputError("greedy rounding needs a zero diagonal");
    if (!(x[i] >= -1.0 - 1e-9 && x[i] <= 1.0 + 1e-9)) throw InputError("fractional point leaves [-1, 1]");
  }
  std::vector<double> cur(x.begin(), x.end());
  std::vector<Spin> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = a.row(i);
    double slope = 0.0;
    for (std::size_t j = 0; j < n; ++j) slope += row[j] * cur[j];
    out[i] = slope >= 0.0 ? 1 : -1;
    cur[i] = out[i];
  }
  return Assignment(std::move(out));
}

QpResult solve_qp_with_advice(const QpMatrix& a, const LabelAdvice& advice) {
  check_dims(a, advice.values.size(), "advice");
  QpResult r;
  r.fractional = maximize_concave(a, advice.values, advice.epsilon);
  r.fractional_objective = advice_objective(a, r.fractional, advice.values, advice.epsilon);
  r.x = greedy_round(a, r.fractional);
  r.value = a.quadratic_form(r.x);
  return r;
}

TwoLinResult solve_2lin_with_advice(const KLinInstance& instance, const LabelAdvice& advice, double reference_value) {
  if (instance.arity() != 2) throw InputError("2-Lin solver needs arity 2");
  const QpMatrix a = to_quadratic_matrix(instance);
  const QpResult qp = solve_qp_with_advice(a, advice);
  TwoLinResult out;
  out.x = qp.x;
  const double w = instance.total_weight();
  out.weight = w / 2.0 + qp.value / 4.0;
  const Evaluation check = evaluate(instance, out.x);
  if (std::abs(check.weight - out.weight) > 1e-6 * std::max(1.0, w)) {
    throw ConsistencyError("quadratic identity gives " + std::to_string(out.weight) + " but recount gives " +
                           std::to_string(check.weight));
  }
  out.weight = check.weight;
  out.fraction = check.fraction;
  double sq = 0.0;
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) sq += instance.weight(c) * instance.weight(c);
  out.guarantee = reference_value - std::sqrt(static_cast<double>(instance.num_vars()) * sq) / advice.epsilon;
  return out;
}

}  // namespace advcsp

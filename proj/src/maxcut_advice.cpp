#include "advcsp/maxcut_advice.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "advcsp/errors.hpp"
#include "advcsp/rng.hpp"

namespace advcsp {

namespace {

double root_d_log_n(std::size_t d, std::size_t n) {
  return std::sqrt(static_cast<double>(d) * std::log(static_cast<double>(n)));
}

std::size_t regular_degree(const GraphInstance& graph) {
  const auto d = graph.degree();
  if (!d) throw InputError("the confident-split pipeline needs a regular graph");
  return *d;
}

enum Role : std::uint8_t { kQ = 0, kS = 1, kT = 2 };

std::vector<std::uint8_t> roles(std::size_t n, const LandscapeSplit& split) {
  std::vector<std::uint8_t> role(n, kQ);
  for (auto v : split.s_side) role[v] = kS;
  for (auto v : split.t_side) role[v] = kT;
  return role;
}

}  // namespace

double MaxCutParams::threshold(std::size_t d, std::size_t n) const { return c1 * root_d_log_n(d, n); }

double MaxCutParams::slack(std::size_t d, std::size_t n, double epsilon) const {
  return c2 * root_d_log_n(d, n) / epsilon;
}

void validate(const MaxCutParams& params) {
  if (!(params.c1 > 0.0) || !std::isfinite(params.c1)) throw InputError("c1 must be positive");
  if (!(params.c2 > 0.0) || !std::isfinite(params.c2)) throw InputError("c2 must be positive");
}

std::vector<long long> compute_deltas(const GraphInstance& graph, const LabelAdvice& advice) {
  const std::size_t n = graph.num_vertices();
  if (advice.values.size() != n) {
    throw InputError("advice has length " + std::to_string(advice.values.size()) + ", graph has " +
                     std::to_string(n) + " vertices");
  }
  std::vector<long long> delta(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    long long s = 0;
    for (auto j : graph.neighbors(i)) s += advice.values[j];
    delta[i] = s;
  }
  return delta;
}

LandscapeSplit split_vertices(std::vector<long long> delta, std::size_t d, std::size_t n, const MaxCutParams& params) {
  validate(params);
  if (d == 0) throw InputError("degree must be at least 1");
  LandscapeSplit split;
  split.threshold = params.threshold(d, n);
  split.delta = std::move(delta);
  for (std::size_t i = 0; i < split.delta.size(); ++i) {
    const long long v = split.delta[i];
    const auto idx = static_cast<std::uint32_t>(i);
    if (static_cast<double>(std::llabs(v)) >= split.threshold) {
      split.confident.push_back(idx);
      (v <= 0 ? split.s_side : split.t_side).push_back(idx);
    } else {
      split.uncertain.push_back(idx);
    }
  }
  return split;
}

SideDegrees side_degrees(const GraphInstance& graph, const LandscapeSplit& split) {
  const std::size_t n = graph.num_vertices();
  const auto role = roles(n, split);
  SideDegrees out{std::vector<long long>(n, 0), std::vector<long long>(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : graph.neighbors(i)) {
      if (role[j] == kS) ++out.to_s[i];
      if (role[j] == kT) ++out.to_t[i];
    }
  }
  return out;
}

LinearProgram build_lp(const GraphInstance& graph, const LandscapeSplit& split, std::size_t d, double epsilon,
                       const MaxCutParams& params) {
  const std::size_t n = graph.num_vertices();
  if (regular_degree(graph) != d) throw InputError("degree argument does not match the graph");
  check_epsilon(epsilon);
  validate(params);

  const std::size_t q = split.uncertain.size();
  std::vector<std::ptrdiff_t> column(n, -1);
  for (std::size_t r = 0; r < q; ++r) column[split.uncertain[r]] = static_cast<std::ptrdiff_t>(r);
  const SideDegrees sides = side_degrees(graph, split);
  const double slack = params.slack(d, n, epsilon);
  const double half = static_cast<double>(d) / 2.0;

  LinearProgram lp(q, 0.0, 1.0);
  for (std::size_t r = 0; r < q; ++r) {
    const auto i = split.uncertain[r];
    lp.objective[r] = static_cast<double>(sides.to_t[i] - sides.to_s[i]);
    lp.objective_offset += static_cast<double>(sides.to_s[i]);
  }
  for (std::size_t r = 0; r < q; ++r) {
    const auto i = split.uncertain[r];
    std::vector<std::pair<std::size_t, double>> terms;
    for (auto j : graph.neighbors(i)) {
      if (column[j] >= 0) terms.emplace_back(static_cast<std::size_t>(column[j]), 1.0);
    }
    const double k = static_cast<double>(terms.size());
    // d_T(i) + sum (1 - theta_j) in [d/2 - slack, d/2 + slack]
    auto negated = terms;
    for (auto& t : negated) t.second = -1.0;
    const double base_t = static_cast<double>(sides.to_t[i]) + k;
    lp.add_row(std::move(negated), half - slack - base_t, half + slack - base_t);
    // d_S(i) + sum theta_j in [d/2 - slack, d/2 + slack]
    const double base_s = static_cast<double>(sides.to_s[i]);
    lp.add_row(std::move(terms), half - slack - base_s, half + slack - base_s);
  }
  return lp;
}

std::optional<BalancedOptimum> solve_balanced(const LinearProgram& lp) {
  const LpOutcome first = solve_lp(lp);
  if (std::holds_alternative<LpInfeasible>(first)) return std::nullopt;
  if (std::holds_alternative<LpUnbounded>(first)) throw ConsistencyError("balancing LP reported unbounded");
  const auto& opt = std::get<LpOptimal>(first);

  // theta_j = 1/2 + p_j - q_j with p_j, q_j >= 0; minimize sum (p_j + q_j)
  // over the optimal face.
  const std::size_t p = lp.num_vars();
  LinearProgram second(2 * p, 0.0, 0.0);
  double centre_value = lp.objective_offset;
  for (std::size_t j = 0; j < p; ++j) {
    if (!(lp.var_lower[j] <= 0.5 && lp.var_upper[j] >= 0.5)) {
      throw InputError("balanced optimum needs every variable box to contain 1/2");
    }
    second.var_upper[2 * j] = lp.var_upper[j] - 0.5;
    second.var_upper[2 * j + 1] = 0.5 - lp.var_lower[j];
    second.objective[2 * j] = -1.0;
    second.objective[2 * j + 1] = -1.0;
    centre_value += 0.5 * lp.objective[j];
  }
  for (const auto& row : lp.rows) {
    std::vector<std::pair<std::size_t, double>> terms;
    double centre = 0.0;
    for (const auto& [j, a] : row.terms) {
      terms.emplace_back(2 * j, a);
      terms.emplace_back(2 * j + 1, -a);
      centre += 0.5 * a;
    }
    second.add_row(std::move(terms), row.lower - centre, row.upper - centre);
  }
  std::vector<std::pair<std::size_t, double>> obj_row;
  for (std::size_t j = 0; j < p; ++j) {
    if (lp.objective[j] == 0.0) continue;
    obj_row.emplace_back(2 * j, lp.objective[j]);
    obj_row.emplace_back(2 * j + 1, -lp.objective[j]);
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(opt.value));
  second.add_row(std::move(obj_row), opt.value - tol - centre_value, kInf);

  BalancedOptimum out;
  out.value = opt.value;
  out.theta = opt.point;
  const LpOutcome refined = solve_lp(second);
  if (const auto* r = std::get_if<LpOptimal>(&refined)) {
    for (std::size_t j = 0; j < p; ++j) {
      out.theta[j] = std::clamp(0.5 + r->point[2 * j] - r->point[2 * j + 1], lp.var_lower[j], lp.var_upper[j]);
    }
    out.value = objective_value(lp, out.theta);
  }
  return out;
}

std::vector<std::uint8_t> round_lp(const std::vector<double>& theta, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<std::uint8_t> y(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double t = theta[i];
    if (!(t >= -1e-9 && t <= 1.0 + 1e-9)) throw InputError("theta " + std::to_string(i) + " outside [0, 1]");
    y[i] = rng.bernoulli(std::clamp(t, 0.0, 1.0)) ? 1 : 0;
  }
  return y;
}

MaxCutResult solve_maxcut_with_advice(const GraphInstance& graph, const LabelAdvice& advice,
                                      const MaxCutParams& params, std::uint64_t seed) {
  const std::size_t d = regular_degree(graph);
  const std::size_t n = graph.num_vertices();
  check_epsilon(advice.epsilon);

  MaxCutResult res;
  res.split = split_vertices(compute_deltas(graph, advice), d, n, params);
  const LandscapeSplit& split = res.split;
  CutDiagnostics& diag = res.diagnostics;
  diag.threshold = split.threshold;
  diag.slack = params.slack(d, n, advice.epsilon);

  const std::size_t q = split.uncertain.size();
  const SideDegrees sides = side_degrees(graph, split);
  const auto balanced = solve_balanced(build_lp(graph, split, d, advice.epsilon, params));

  std::vector<std::uint8_t> y;
  if (balanced) {
    diag.lp_value = balanced->value;
    diag.theta = balanced->theta;
    y = round_lp(diag.theta, seed);
  } else {
    diag.lp_feasible = false;
    diag.fallback = true;
    y.resize(q);
    diag.theta.resize(q);
    for (std::size_t r = 0; r < q; ++r) {
      y[r] = split.delta[split.uncertain[r]] <= 0 ? 1 : 0;
      diag.theta[r] = y[r];
    }
  }

  std::vector<Spin> side(n, 1);
  for (auto v : split.t_side) side[v] = -1;
  for (std::size_t r = 0; r < q; ++r) side[split.uncertain[r]] = y[r] ? 1 : -1;
  res.side = Assignment(std::move(side));

  const auto role = roles(n, split);
  diag.d_s.resize(q);
  diag.d_t.resize(q);
  diag.d_out.resize(q);
  const double bound = static_cast<double>(d) / 2.0 + 2.0 * diag.slack;
  long long out_sum = 0;
  for (std::size_t r = 0; r < q; ++r) {
    const auto i = split.uncertain[r];
    diag.d_s[r] = sides.to_s[i];
    diag.d_t[r] = sides.to_t[i];
    diag.f_value += y[r] ? sides.to_t[i] : sides.to_s[i];
    diag.expected_f += diag.theta[r] * static_cast<double>(sides.to_t[i]) +
                       (1.0 - diag.theta[r]) * static_cast<double>(sides.to_s[i]);
    long long in_s = 0, in_t = 0;
    for (auto j : graph.neighbors(i)) (res.side[j] > 0 ? in_s : in_t) += 1;
    diag.d_out[r] = res.side[i] > 0 ? in_t : in_s;
    out_sum += diag.d_out[r];
    if (static_cast<double>(std::max(in_s, in_t)) > bound) ++diag.balance_violations;
  }
  for (const auto& [u, v] : graph.edges()) {
    if (res.side[u] == res.side[v]) continue;
    if (role[u] == kQ || role[v] == kQ) ++diag.q_cut_direct;
  }
  diag.q_cut_twice_identity = diag.f_value + out_sum;
  if (diag.q_cut_twice_identity != 2 * diag.q_cut_direct) {
    throw ConsistencyError("cut decomposition over Q does not balance");
  }

  res.cut_weight = graph.num_edges() == 0 ? 0.0 : evaluate(graph.to_klin(), res.side).weight;
  if (res.cut_weight != static_cast<double>(graph.cut_size(res.side))) {
    throw ConsistencyError("cut weight disagrees with the edge count");
  }
  return res;
}

}  // namespace advcsp

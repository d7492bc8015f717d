#include "advcsp/max3lin_advice.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "advcsp/errors.hpp"

namespace advcsp {

namespace {

void require_arity3(const KLinInstance& phi) {
  if (phi.arity() != 3) throw InputError("expected a 3-Lin instance, got arity " + std::to_string(phi.arity()));
}

int sign_of(long long s) { return (s > 0) - (s < 0); }

// The variable of constraint c that is neither i nor j.
std::uint32_t third(const KLinInstance& phi, std::size_t c, std::uint32_t i, std::uint32_t j) {
  for (auto v : phi.vars(c)) {
    if (v != i && v != j) return v;
  }
  throw ConsistencyError("constraint does not contain the pair");
}

}  // namespace

std::size_t heavy_threshold(double delta, double epsilon) {
  if (!(delta > 0.0 && delta <= 0.5)) throw InputError("delta must lie in (0, 1/2]");
  check_epsilon(epsilon);
  const double t = 8.0 / (epsilon * epsilon) * std::log(1.0 / delta);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t - 1e-9)));
}

std::uint64_t PairIncidence::key(std::uint32_t i, std::uint32_t j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | j;
}

std::size_t PairIncidence::find(std::uint32_t i, std::uint32_t j) const {
  const std::uint64_t k = key(i, j);
  const auto it = std::lower_bound(keys.begin(), keys.end(), k);
  return it != keys.end() && *it == k ? static_cast<std::size_t>(it - keys.begin()) : keys.size();
}

Classification classify_constraints(const KLinInstance& phi, std::size_t t) {
  require_arity3(phi);
  if (t == 0) throw InputError("threshold must be at least 1");
  const std::size_t m = phi.num_constraints();

  std::vector<std::pair<std::uint64_t, std::uint32_t>> incid;
  incid.reserve(3 * m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto v = phi.vars(c);
    const auto ci = static_cast<std::uint32_t>(c);
    incid.emplace_back(PairIncidence::key(v[0], v[1]), ci);
    incid.emplace_back(PairIncidence::key(v[0], v[2]), ci);
    incid.emplace_back(PairIncidence::key(v[1], v[2]), ci);
  }
  std::sort(incid.begin(), incid.end());

  Classification out;
  PairIncidence& pairs = out.pairs;
  pairs.threshold = t;
  pairs.members.reserve(incid.size());
  for (std::size_t r = 0; r < incid.size(); ++r) {
    if (r == 0 || incid[r].first != incid[r - 1].first) {
      pairs.keys.push_back(incid[r].first);
      pairs.start.push_back(r);
    }
    pairs.members.push_back(incid[r].second);
  }
  pairs.start.push_back(incid.size());
  pairs.heavy.resize(pairs.keys.size());
  for (std::size_t p = 0; p < pairs.keys.size(); ++p) pairs.heavy[p] = pairs.start[p + 1] - pairs.start[p] >= t;

  LightSets& light = out.light;
  light.constraint_heavy.assign(m, 0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!pairs.heavy[p]) continue;
    for (auto c : pairs.constraints(p)) light.constraint_heavy[c] = 1;
  }
  light.sets.resize(phi.num_vars());
  for (std::size_t c = 0; c < m; ++c) {
    if (light.constraint_heavy[c]) continue;
    for (auto v : phi.vars(c)) light.sets[v].push_back(static_cast<std::uint32_t>(c));
  }
  return out;
}

ConstraintBatch create_h_constraints(std::uint32_t i, std::uint32_t j, std::span<const std::uint32_t> members,
                                     const Assignment& advice, const KLinInstance& phi, std::uint32_t group) {
  long long sum = 0;
  for (auto c : members) sum += phi.rhs(c) * advice[third(phi, c, i, j)];
  ConstraintBatch out;
  out.sign = sign_of(sum);
  const Spin sigma = out.sign < 0 ? -1 : 1;
  const bool flag = out.sign == 0;
  out.constraints.reserve(2 * members.size());
  for (auto c : members) {
    PsiConstraint pair{i, j, false, sigma, flag, c, group, true};
    const std::uint32_t k = third(phi, c, i, j);
    PsiConstraint unit{k, k, true, static_cast<Spin>(sigma * phi.rhs(c)), flag, c, group, true};
    out.constraints.push_back(pair);
    out.constraints.push_back(unit);
  }
  return out;
}

ConstraintBatch create_l_constraints(std::uint32_t i, std::span<const std::uint32_t> light, const Assignment& advice,
                                     const KLinInstance& phi) {
  long long sum = 0;
  for (auto c : light) {
    long long term = phi.rhs(c);
    for (auto v : phi.vars(c)) {
      if (v != i) term *= advice[v];
    }
    sum += term;
  }
  ConstraintBatch out;
  out.sign = sign_of(sum);
  const Spin sigma = out.sign < 0 ? -1 : 1;
  for (auto c : light) out.constraints.push_back(PsiConstraint{i, i, true, sigma, out.sign == 0, c, i, false});
  return out;
}

double ReducedInstance::value(const Assignment& x) const {
  if (x.size() != num_vars) throw InputError("assignment length does not match the instance");
  double w = 0.0;
  for (const auto& c : constraints) w += c.satisfied(x);
  return w;
}

std::size_t ReducedInstance::flagged() const {
  return static_cast<std::size_t>(
      std::count_if(constraints.begin(), constraints.end(), [](const PsiConstraint& c) { return c.always_violated; }));
}

TwoLinInstance ReducedInstance::solvable() const {
  TwoLinInstance out(num_vars);
  for (const auto& c : constraints) {
    if (c.always_violated) continue;
    if (c.unary) {
      out.add_unary(c.a, c.rhs);
    } else {
      out.add_binary(c.a, c.b, c.rhs);
    }
  }
  return out;
}

ReducedInstance build_psi(const KLinInstance& phi, const Assignment& advice, double delta, double epsilon) {
  require_arity3(phi);
  if (advice.size() != phi.num_vars()) throw InputError("advice length does not match the instance");
  ReducedInstance out;
  out.num_vars = phi.num_vars();
  out.threshold = heavy_threshold(delta, epsilon);
  out.classes = classify_constraints(phi, out.threshold);
  const PairIncidence& pairs = out.classes.pairs;

  out.pair_sign.assign(pairs.size(), 0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!pairs.heavy[p]) continue;
    auto batch = create_h_constraints(PairIncidence::first(pairs.keys[p]), PairIncidence::second(pairs.keys[p]),
                                      pairs.constraints(p), advice, phi, static_cast<std::uint32_t>(p));
    out.pair_sign[p] = batch.sign;
    out.constraints.insert(out.constraints.end(), batch.constraints.begin(), batch.constraints.end());
  }
  out.var_sign.assign(phi.num_vars(), 0);
  for (std::size_t i = 0; i < phi.num_vars(); ++i) {
    const auto& li = out.classes.light.sets[i];
    if (li.empty()) continue;
    auto batch = create_l_constraints(static_cast<std::uint32_t>(i), li, advice, phi);
    out.var_sign[i] = batch.sign;
    out.constraints.insert(out.constraints.end(), batch.constraints.begin(), batch.constraints.end());
  }
  return out;
}

std::size_t heavy_implication_failures(const KLinInstance& phi, const ReducedInstance& psi, const Assignment& x) {
  std::size_t failures = 0;
  const auto& cs = psi.constraints;
  for (std::size_t r = 0; r + 1 < cs.size(); ++r) {
    if (!cs[r].from_heavy || cs[r].unary) continue;
    if (cs[r].satisfied(x) && cs[r + 1].satisfied(x) && !phi.satisfied(cs[r].source, x)) ++failures;
  }
  return failures;
}

AccountingAudit audit_accounting(const KLinInstance& phi, const ReducedInstance& psi, const Assignment& x_hat,
                                 const Assignment& x_star) {
  AccountingAudit audit;
  const auto& heavy = psi.classes.light.constraint_heavy;
  for (std::size_t c = 0; c < phi.num_constraints(); ++c) {
    if (!phi.satisfied(c, x_hat)) ++audit.unsatisfied;
    if (!heavy[c] && !phi.satisfied(c, x_star)) ++audit.light_sources_violated_by_truth;
  }
  for (const auto& c : psi.constraints) {
    if (c.from_heavy) {
      audit.heavy_reps_violated += !c.satisfied(x_hat);
    } else {
      audit.light_reps_violated += !c.satisfied(x_hat) || !c.satisfied(x_star);
    }
  }
  return audit;
}

Max3LinResult solve_max3lin_with_advice(const KLinInstance& phi, const LabelAdvice& advice, double delta,
                                        std::uint64_t seed, const TwoLinConfig& config) {
  require_arity3(phi);
  check_epsilon(advice.epsilon);
  const ReducedInstance psi = build_psi(phi, advice.values, delta, advice.epsilon);
  const TwoLinSolution sol = solve_2lin(psi.solvable(), config, seed, &advice.values);

  Max3LinResult out;
  out.x = sol.x;
  const Evaluation ev = evaluate(phi, out.x);
  out.weight = ev.weight;
  out.fraction = ev.fraction;

  Max3LinDiagnostics& d = out.diagnostics;
  d.threshold = psi.threshold;
  for (auto h : psi.classes.pairs.heavy) d.heavy_pairs += h;
  for (auto h : psi.classes.light.constraint_heavy) (h ? d.heavy_sources : d.light_sources) += 1;
  d.psi_size = psi.constraints.size();
  d.flagged = psi.flagged();
  d.psi_value = psi.value(out.x);
  for (const auto& c : psi.constraints) {
    if (c.from_heavy && !c.satisfied(out.x)) ++d.unsatisfied_heavy_reps;
  }
  const auto& heavy = psi.classes.light.constraint_heavy;
  for (std::size_t c = 0; c < phi.num_constraints(); ++c) {
    if (phi.satisfied(c, out.x)) continue;
    (heavy[c] ? d.unsatisfied_heavy : d.unsatisfied_light) += 1;
  }
  d.implication_failures = heavy_implication_failures(phi, psi, out.x);
  if (d.implication_failures != 0) throw ConsistencyError("heavy representative implication failed");
  const double e = advice.epsilon;
  const double floor = std::log(1.0 / delta) / delta / std::pow(e, 6) * static_cast<double>(phi.num_vars());
  d.below_constraint_floor = static_cast<double>(phi.num_constraints()) < floor;
  return out;
}

}  // namespace advcsp

#include "advcsp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <variant>

#include "advcsp/advice.hpp"
#include "advcsp/enumeration.hpp"
#include "advcsp/errors.hpp"
#include "advcsp/instance.hpp"
#include "advcsp/io.hpp"
#include "advcsp/lp.hpp"
#include "advcsp/max3lin_advice.hpp"
#include "advcsp/maxcut_advice.hpp"
#include "advcsp/qp_advice.hpp"
#include "advcsp/reduction.hpp"
#include "advcsp/rng.hpp"
#include "advcsp/twolin_sdp.hpp"

namespace advcsp {

namespace {

class Checker {
 public:
  explicit Checker(SuiteReport& r) : r_(r) {}

  void operator()(bool ok, const std::string& what) {
    ++r_.checks;
    if (ok) return;
    ++r_.failures;
    if (r_.first_failure.empty()) r_.first_failure = what;
  }

 private:
  SuiteReport& r_;
};

std::string at_seed(const std::string& what, std::uint64_t seed) {
  std::ostringstream s;
  s << what << " (seed " << seed << ")";
  return s.str();
}

KLinInstance random_instance(std::size_t k, std::size_t n, std::size_t m, CounterRng& rng, bool weighted) {
  KLinInstance inst(k, n);
  std::vector<std::uint32_t> vars;
  for (std::size_t c = 0; c < m; ++c) {
    vars.clear();
    while (vars.size() < k) {
      const auto v = static_cast<std::uint32_t>(rng.below(n));
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    inst.add(vars, rng.sign(), weighted ? 0.25 + rng.uniform() * 2.0 : 1.0);
  }
  return inst;
}

Assignment from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<Spin> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? -1 : 1;
  return Assignment(std::move(v));
}

Assignment random_assignment(std::size_t n, CounterRng& rng) {
  std::vector<Spin> v(n);
  for (auto& s : v) s = static_cast<Spin>(rng.sign());
  return Assignment(std::move(v));
}

void suite_instance(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const std::size_t k = 2 + rng.below(2);
    const std::size_t n = 4 + rng.below(7);
    KLinInstance inst = random_instance(k, n, 1 + rng.below(20), rng, true);
    const QpMatrix a = k == 2 ? to_quadratic_matrix(inst) : QpMatrix(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const Assignment x = from_mask(n, mask);
      const double w = evaluate(inst, x).weight;
      const Assignment neg = x.negated();
      if (k % 2 == 0) {
        check(evaluate(inst, neg).weight == w, at_seed("even-arity negation changed the value", seed));
        check(std::abs(quadratic_identity_value(a, inst.total_weight(), x) - w) <= 1e-9 * (1 + w),
              at_seed("quadratic identity disagrees with evaluate", seed));
      } else {
        for (std::size_t c = 0; c < inst.num_constraints(); ++c) {
          check(inst.satisfied(c, neg) != inst.satisfied(c, x), at_seed("odd-arity negation kept a constraint", seed));
        }
      }
    }
    std::stringstream io;
    write_instance(io, inst);
    check(parse_instance(io) == inst, at_seed("instance round trip differs", seed));
    const PlantedKLin p1 = plant_klin(n, k, 10, 0.0, seed), p2 = plant_klin(n, k, 10, 0.0, seed);
    check(p1.instance == p2.instance && p1.planted == p2.planted, at_seed("plant_klin is not deterministic", seed));
    check(evaluate(p1.instance, p1.planted).fraction == 1.0, at_seed("noiseless plant not satisfied", seed));
  }
  const PlantedGraph g = plant_bipartite_regular(64, 6, 0.0, master);
  check(g.graph.cut_size(g.planted) == g.graph.num_edges(), "bipartite plant leaves an edge uncut");
  check(g.graph.degree() == std::optional<std::size_t>(6), "bipartite plant is not 6-regular");
}

void suite_advice(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const Assignment x = random_assignment(200, rng);
    check(gen_label_advice(x, 1.0, seed).values == x, at_seed("epsilon 1 label advice differs from truth", seed));
    check(gen_label_advice(x, 0.3, seed) == gen_label_advice(x, 0.3, seed), at_seed("label advice not deterministic", seed));
    const SubsetAdvice sub = gen_subset_advice(x, 0.4, seed);
    const LabelAdvice lab = subset_to_label(sub, seed);
    bool revealed = true;
    for (std::size_t r = 0; r < sub.indices.size(); ++r) {
      revealed = revealed && sub.values[r] == x[sub.indices[r]] && lab.values[sub.indices[r]] == x[sub.indices[r]];
    }
    check(revealed, at_seed("revealed coordinates differ from truth", seed));
    check(lab.epsilon == sub.epsilon, at_seed("conversion changed epsilon", seed));
    check(empirical_correlation(LabelAdvice{x, 1.0}, x) == 1.0, "self-correlation is not 1");
  }
}

void suite_lp(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const std::size_t p = 1 + rng.below(5);
    LinearProgram lp(p, 0.0, 1.0);
    for (auto& c : lp.objective) c = rng.uniform() * 4 - 2;
    const std::size_t rows = rng.below(5);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::pair<std::size_t, double>> terms;
      for (std::size_t j = 0; j < p; ++j) terms.emplace_back(j, rng.uniform() * 4 - 2);
      const double lo = rng.uniform() * 2 - 1.5;
      lp.add_row(std::move(terms), lo, lo + rng.uniform() * 2);
    }
    const LpOutcome a = solve_lp(lp), b = solve_lp(lp);
    check(a.index() == b.index(), at_seed("LP outcome not deterministic", seed));
    const auto* opt = std::get_if<LpOptimal>(&a);
    if (opt) {
      check(opt->point == std::get<LpOptimal>(b).point, at_seed("LP point not deterministic", seed));
      check(max_violation(lp, opt->point) <= 1e-7, at_seed("LP optimum violates a constraint", seed));
    }
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> w(p);
      for (auto& v : w) v = rng.uniform();
      if (max_violation(lp, w) > 0.0) continue;
      check(opt != nullptr, at_seed("LP reported infeasible despite a feasible witness", seed));
      if (opt) check(objective_value(lp, w) <= opt->value + 1e-7, at_seed("witness beats the LP optimum", seed));
    }
  }
}

void suite_qp(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const std::size_t n = 3 + rng.below(6);
    QpMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) a.add_symmetric(i, j, rng.uniform() * 2 - 1);
    }
    const Assignment y = random_assignment(n, rng);
    const double eps = 0.1 + 0.9 * rng.uniform();
    std::vector<double> x1(n), x2(n), mid(n);
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] = rng.uniform() * 2 - 1;
      x2[i] = rng.uniform() * 2 - 1;
      mid[i] = (x1[i] + x2[i]) / 2;
    }
    const double f1 = advice_objective(a, x1, y, eps), f2 = advice_objective(a, x2, y, eps);
    check(advice_objective(a, mid, y, eps) >= (f1 + f2) / 2 - 1e-9, at_seed("F is not concave", seed));
    check(a.quadratic_form(x1) >= f1 / eps - 1e-9, at_seed("<x,Ax> < F/eps", seed));
    const Assignment r = greedy_round(a, x1);
    check(a.quadratic_form(r) >= a.quadratic_form(x1) - 1e-9, at_seed("rounding decreased the form", seed));
    const QpResult res = solve_qp_with_advice(a, LabelAdvice{y, eps});
    check(res.fractional_objective >= advice_objective(a, std::vector<double>(y.values().begin(), y.values().end()), y, eps) - 1e-7,
          at_seed("concave maximizer beaten by the advice point", seed));
    double best = -1e300;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) best = std::max(best, a.quadratic_form(from_mask(n, mask)));
    check(res.value <= best + 1e-9, at_seed("QP output exceeds the brute-force maximum", seed));
  }
}

void suite_maxcut(Checker& check, std::size_t seeds, std::uint64_t master) {
  const std::size_t n = 1024, d = 64;
  const double eps = 0.3;
  const MaxCutParams params = MaxCutParams::bench_preset();
  const PlantedGraph plant = plant_bipartite_regular(n, d, 0.0, master);
  const GraphInstance& g = plant.graph;
  const Assignment& xs = plant.planted;
  std::vector<long long> delta_star(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : g.neighbors(i)) delta_star[i] += xs[j];
  }
  const double root = std::sqrt(d * std::log(static_cast<double>(n)));
  const double slack = params.slack(d, n, eps);
  std::size_t contained = 0, tail_violations = 0, balanced = 0, f_close = 0, feasible = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    const LabelAdvice adv = gen_label_advice(xs, eps, seed);
    const MaxCutResult r = solve_maxcut_with_advice(g, adv, params, derive_seed(seed, 1));
    bool ok = true;
    for (auto v : r.split.s_side) ok = ok && xs[v] == 1;
    for (auto v : r.split.t_side) ok = ok && xs[v] == -1;
    contained += ok;
    bool tail = true;
    for (std::size_t i = 0; i < n; ++i) tail = tail && std::abs(r.split.delta[i] - eps * delta_star[i]) <= 4 * root;
    tail_violations += !tail;
    if (tail) {
      bool bounded = true;
      for (auto v : r.split.uncertain) bounded = bounded && std::abs(delta_star[v]) <= slack;
      check(bounded, at_seed("uncertain vertex with |Delta*| above the slack", seed));
    }
    check(r.diagnostics.q_cut_twice_identity == 2 * r.diagnostics.q_cut_direct, at_seed("cut identity failed", seed));
    long long f = 0;
    for (std::size_t q = 0; q < r.split.uncertain.size(); ++q) {
      f += r.side[r.split.uncertain[q]] > 0 ? r.diagnostics.d_t[q] : r.diagnostics.d_s[q];
    }
    check(f == r.diagnostics.f_value, at_seed("F(y) recount differs", seed));
    if (r.diagnostics.lp_feasible) {
      ++feasible;
      balanced += r.diagnostics.balance_violations == 0;
    }
    f_close += std::abs(static_cast<double>(r.diagnostics.f_value) - r.diagnostics.expected_f) <=
               4 * d * std::sqrt(n * std::log(static_cast<double>(n)));
    std::vector<std::uint8_t> seen(n, 0);
    for (auto v : r.split.confident) seen[v] += 1;
    for (auto v : r.split.uncertain) seen[v] += 1;
    check(std::all_of(seen.begin(), seen.end(), [](auto c) { return c == 1; }), at_seed("split is not a partition", seed));
  }
  const double sd = static_cast<double>(seeds);
  check(contained >= 0.99 * sd, "containment held in fewer than 99% of draws");
  check(tail_violations <= 0.05 * sd, "uniform tail violated in more than 5% of draws");
  check(balanced >= 0.9 * static_cast<double>(feasible), "balance held in fewer than 90% of feasible draws");
  check(f_close >= 0.9 * sd, "F(y) concentration held in fewer than 90% of draws");
}

void suite_twolin(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const std::size_t n = 4 + rng.below(9);
    TwoLinInstance inst(n);
    const std::size_t m = 5 + rng.below(20);
    for (std::size_t c = 0; c < m; ++c) {
      const auto a = static_cast<std::uint32_t>(rng.below(n));
      auto b = static_cast<std::uint32_t>(rng.below(n - 1));
      if (b >= a) ++b;
      if (rng.below(4) == 0) {
        inst.add_unary(a, rng.sign(), 0.5 + rng.uniform());
      } else {
        inst.add_binary(a, b, rng.sign(), 0.5 + rng.uniform());
      }
    }
    const KLinInstance hom = homogenize(inst);
    check(std::abs(hom.total_weight() - inst.total_weight()) <= 1e-12, at_seed("homogenization changed W", seed));
    const UnitEmbedding v = solve_relaxation(hom, default_rank(hom.num_vars()), 1000, seed);
    bool mono = true;
    for (std::size_t h = 1; h < v.history.size(); ++h) mono = mono && v.history[h] >= v.history[h - 1] - 1e-9;
    check(mono, at_seed("relaxation objective decreased", seed));
    const RoundingResult rr = hyperplane_round(hom, v, 16, seed);
    check(std::all_of(rr.trial_weights.begin(), rr.trial_weights.end(), [&](double w) { return w <= rr.weight; }),
          at_seed("best trial is not the maximum", seed));
    check(std::abs(inst.satisfied_weight(dehomogenize(rr.x)) - evaluate(hom, rr.x).weight) <= 1e-9,
          at_seed("dehomogenization changed the weight", seed));
    check(v.objective() >= rr.weight - 1e-6 * inst.total_weight(), at_seed("rounded weight exceeds the relaxation", seed));
  }
}

void suite_max3lin(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const std::size_t n = 8 + rng.below(20);
    const PlantedKLin plant = plant_klin(n, 3, 50 + rng.below(300), 0.1, seed);
    const double eps = 0.3 + 0.7 * rng.uniform();
    const LabelAdvice adv = gen_label_advice(plant.planted, eps, derive_seed(seed, 1));
    const ReducedInstance psi = build_psi(plant.instance, adv.values, 0.2, eps);
    const auto& pairs = psi.classes.pairs;
    std::size_t incidences = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) incidences += pairs.constraints(p).size();
    check(incidences == 3 * plant.instance.num_constraints(), at_seed("pair incidences differ from 3m", seed));
    std::vector<std::size_t> reps(plant.instance.num_constraints(), 0);
    for (const auto& c : psi.constraints) reps[c.source] += 1;
    bool counts = true;
    for (std::size_t c = 0; c < reps.size(); ++c) {
      const bool heavy = psi.classes.light.constraint_heavy[c];
      counts = counts && (heavy ? (reps[c] == 2 || reps[c] == 4 || reps[c] == 6) : reps[c] == 3);
    }
    check(counts, at_seed("representative counts outside {2, 4, 6} / 3", seed));
    const Max3LinResult r = solve_max3lin_with_advice(plant.instance, adv, 0.2, seed, TwoLinConfig{0, 50, 20, true});
    check(r.diagnostics.implication_failures == 0, at_seed("heavy implication failed", seed));
    check(audit_accounting(plant.instance, psi, r.x, plant.planted).holds(), at_seed("accounting bound failed", seed));

    const PlantedKLin clean = plant_klin(n, 3, 100, 0.0, seed);
    const ReducedInstance exact = build_psi(clean.instance, clean.planted, 0.2, 1.0);
    bool all = true;
    for (const auto& c : exact.constraints) all = all && (c.always_violated || c.satisfied(clean.planted));
    check(all, at_seed("noiseless truth violates an unflagged representative", seed));
  }
}

void suite_enumeration(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const std::size_t n = 4 + rng.below(4);
    const KLinInstance inst = random_instance(2, n, 3 + rng.below(8), rng, false);
    std::uint64_t calls = 0;
    const SubsetSolver inner = [&](const SubsetAdvice& adv, std::uint64_t) {
      ++calls;
      std::vector<Spin> x(n, 1);
      for (std::size_t r = 0; r < adv.indices.size(); ++r) x[adv.indices[r]] = adv.values[r];
      return Assignment(std::move(x));
    };
    const EnumerationResult small = enumerate_solve(inst, 0.1, inner, seed);
    calls = 0;
    const EnumerationResult big = enumerate_solve(inst, 0.25, inner, seed);
    check(calls == *projected_runs(n, 0.25) && big.runs == calls, at_seed("run count differs from projection", seed));
    check(big.value >= small.value, at_seed("larger epsilon lowered the value", seed));
  }
}

void suite_reduction(Checker& check, std::size_t seeds, std::uint64_t master) {
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::uint64_t seed = derive_seed(master, s);
    CounterRng rng(seed);
    const std::size_t n = 3 + rng.below(10), t = 1 + rng.below(8), m = 1 + rng.below(30);
    const KLinInstance phi = random_instance(3, n, m, rng, false);
    const FourLinLift lift = three_to_four_lin(phi, t);
    check(lift.instance.num_vars() == n + t && lift.instance.num_constraints() == m * t,
          at_seed("lift counts are wrong", seed));
    const Assignment sigma = random_assignment(n, rng);
    check(evaluate(lift.instance, lift_assignment(sigma, t)).weight == evaluate(phi, sigma).weight * static_cast<double>(t),
          at_seed("completeness equality failed", seed));
    const Assignment sp = random_assignment(n + t, rng);
    const Projection proj = project_assignment(sp, phi);
    check(proj.weight * static_cast<double>(t) >= evaluate(lift.instance, sp).weight,
          at_seed("soundness inequality failed", seed));
  }
}

using Suite = std::function<void(Checker&, std::size_t, std::uint64_t)>;

const std::map<std::string, Suite>& suites() {
  static const std::map<std::string, Suite> table = {
      {"instance", suite_instance}, {"advice", suite_advice},       {"lp", suite_lp},
      {"qp", suite_qp},             {"maxcut-lemmas", suite_maxcut}, {"twolin", suite_twolin},
      {"max3lin", suite_max3lin},   {"enumeration", suite_enumeration}, {"reduction", suite_reduction}};
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"instance", "advice",  "lp",          "qp",       "maxcut-lemmas",
                                                 "twolin",   "max3lin", "enumeration", "reduction"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::size_t seeds, std::uint64_t master) {
  const auto it = suites().find(name);
  if (it == suites().end()) throw InputError("unknown suite '" + name + "'");
  SuiteReport report;
  report.suite = name;
  Checker check(report);
  it->second(check, seeds, master);
  return report;
}

}  // namespace advcsp

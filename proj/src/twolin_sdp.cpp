#include "advcsp/twolin_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "advcsp/errors.hpp"
#include "advcsp/rng.hpp"

namespace advcsp {

namespace {

void check_rhs_weight(int rhs, double weight) {
  if (rhs != 1 && rhs != -1) throw InputError("rhs must be +1 or -1");
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw InputError("weight must be finite and nonnegative");
}

// Merged symmetric coefficients b_ij = sum rhs * w, stored as adjacency lists.
struct Coupling {
  std::vector<std::size_t> start;
  std::vector<std::uint32_t> nbr;
  std::vector<double> coef;
};

Coupling build_coupling(const KLinInstance& instance) {
  const std::size_t n = instance.num_vars();
  std::vector<std::map<std::uint32_t, double>> merged(n);
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) {
    const auto v = instance.vars(c);
    const double b = instance.rhs(c) * instance.weight(c);
    merged[v[0]][v[1]] += b;
    merged[v[1]][v[0]] += b;
  }
  Coupling out;
  out.start.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, b] : merged[i]) {
      if (b == 0.0) continue;
      out.nbr.push_back(j);
      out.coef.push_back(b);
    }
    out.start[i + 1] = out.nbr.size();
  }
  return out;
}

void require_pure(const KLinInstance& instance) {
  if (instance.arity() != 2) throw InputError("expected a pure 2-Lin instance");
}

}  // namespace

TwoLinInstance::TwoLinInstance(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw InputError("instance needs at least one variable");
}

TwoLinInstance TwoLinInstance::from_klin(const KLinInstance& instance) {
  if (instance.arity() > 2) throw InputError("arity " + std::to_string(instance.arity()) + " is not 1 or 2");
  TwoLinInstance out(instance.num_vars());
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) {
    const auto v = instance.vars(c);
    if (instance.arity() == 1) {
      out.add_unary(v[0], instance.rhs(c), instance.weight(c));
    } else {
      out.add_binary(v[0], v[1], instance.rhs(c), instance.weight(c));
    }
  }
  return out;
}

void TwoLinInstance::add_unary(std::uint32_t var, int rhs, double weight) {
  if (var >= num_vars_) throw InputError("variable index out of range");
  check_rhs_weight(rhs, weight);
  unary_.push_back({var, static_cast<Spin>(rhs), weight});
  total_weight_ += weight;
}

void TwoLinInstance::add_binary(std::uint32_t a, std::uint32_t b, int rhs, double weight) {
  if (a >= num_vars_ || b >= num_vars_) throw InputError("variable index out of range");
  if (a == b) throw InputError("binary constraint needs two distinct variables");
  check_rhs_weight(rhs, weight);
  binary_.push_back({a, b, static_cast<Spin>(rhs), weight});
  total_weight_ += weight;
}

double TwoLinInstance::satisfied_weight(const Assignment& x) const {
  if (x.size() != num_vars_) throw InputError("assignment length does not match the instance");
  double w = 0.0;
  for (const auto& u : unary_) {
    if (x[u.var] == u.rhs) w += u.weight;
  }
  for (const auto& b : binary_) {
    if (x[b.a] * x[b.b] == b.rhs) w += b.weight;
  }
  return w;
}

KLinInstance homogenize(const TwoLinInstance& instance) {
  const std::size_t n = instance.num_vars();
  KLinInstance out(2, n + 1);
  out.reserve(instance.num_constraints());
  const auto ref = static_cast<std::uint32_t>(n);
  for (const auto& b : instance.binary()) out.add({b.a, b.b}, b.rhs, b.weight);
  for (const auto& u : instance.unary()) out.add({u.var, ref}, u.rhs, u.weight);
  return out;
}

Assignment dehomogenize(const Assignment& x) {
  if (x.size() < 2) throw InputError("homogenized assignment needs a reference coordinate");
  const std::size_t n = x.size() - 1;
  const Spin s = x[n];
  std::vector<Spin> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Spin>(x[i] * s);
  return Assignment(std::move(out));
}

double relaxation_objective(const KLinInstance& instance, const UnitEmbedding& v) {
  require_pure(instance);
  double total = 0.0;
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) {
    const auto e = instance.vars(c);
    const double* a = v.row(e[0]);
    const double* b = v.row(e[1]);
    double dot = 0.0;
    for (std::size_t k = 0; k < v.rank; ++k) dot += a[k] * b[k];
    total += instance.weight(c) * (1.0 + instance.rhs(c) * dot) / 2.0;
  }
  return total;
}

UnitEmbedding solve_relaxation(const KLinInstance& instance, std::size_t rank, std::size_t sweeps,
                               std::uint64_t seed) {
  require_pure(instance);
  if (rank < 2) throw InputError("rank must be at least 2");
  const std::size_t n = instance.num_vars();
  UnitEmbedding v;
  v.rows = n;
  v.rank = rank;
  v.data.resize(n * rank);

  CounterRng rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t i = 0; i < n; ++i) {
    double* r = v.data.data() + i * rank;
    double norm = 0.0;
    while (norm == 0.0) {
      norm = 0.0;
      for (std::size_t k = 0; k < rank; ++k) {
        r[k] = gauss(rng);
        norm += r[k] * r[k];
      }
    }
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < rank; ++k) r[k] /= norm;
  }

  const Coupling cp = build_coupling(instance);
  const double tol = 1e-9 * std::max(instance.total_weight(), 1e-300);
  std::vector<double> g(rank);
  v.history.push_back(relaxation_objective(instance, v));
  for (std::size_t s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t e = cp.start[i]; e < cp.start[i + 1]; ++e) {
        const double* u = v.row(cp.nbr[e]);
        const double b = cp.coef[e];
        for (std::size_t k = 0; k < rank; ++k) g[k] += b * u[k];
      }
      double norm = 0.0;
      for (double x : g) norm += x * x;
      if (norm == 0.0) continue;
      norm = std::sqrt(norm);
      double* r = v.data.data() + i * rank;
      for (std::size_t k = 0; k < rank; ++k) r[k] = g[k] / norm;
    }
    ++v.sweeps_run;
    v.history.push_back(relaxation_objective(instance, v));
    if (v.history.back() - v.history[v.history.size() - 2] < tol) break;
  }
  return v;
}

RoundingResult hyperplane_round(const KLinInstance& instance, const UnitEmbedding& v, std::size_t trials,
                                std::uint64_t seed) {
  require_pure(instance);
  if (trials == 0) throw InputError("need at least one rounding trial");
  if (v.rows != instance.num_vars()) throw InputError("embedding rows do not match the instance");
  const std::size_t n = v.rows;
  RoundingResult best;
  std::vector<double> dir(v.rank);
  std::vector<Spin> x(n);
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng(derive_seed(seed, t));
    std::normal_distribution<double> gauss;
    for (auto& d : dir) d = gauss(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double* r = v.row(i);
      double dot = 0.0;
      for (std::size_t k = 0; k < v.rank; ++k) dot += r[k] * dir[k];
      x[i] = dot >= 0.0 ? 1 : -1;
    }
    Assignment a(x);
    const double w = evaluate(instance, a).weight;
    best.trial_weights.push_back(w);
    if (t == 0 || w > best.weight) {
      best.weight = w;
      best.x = std::move(a);
    }
  }
  return best;
}

std::size_t single_flip_search(const KLinInstance& instance, Assignment& x, std::optional<std::size_t> frozen) {
  require_pure(instance);
  const std::size_t n = instance.num_vars();
  const std::size_t m = instance.num_constraints();
  if (x.size() != n) throw InputError("assignment length does not match the instance");
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t c = 0; c < m; ++c) {
    for (auto v : instance.vars(c)) incident[v].push_back(c);
  }
  std::vector<char> sat(m);
  std::vector<double> gain(n, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    sat[c] = instance.satisfied(c, x);
    const double w = sat[c] ? -instance.weight(c) : instance.weight(c);
    for (auto v : instance.vars(c)) gain[v] += w;
  }
  const double eps = 1e-12 * std::max(1.0, instance.total_weight());
  std::size_t flips = 0;
  while (true) {
    std::size_t best = n;
    double best_gain = eps;
    for (std::size_t i = 0; i < n; ++i) {
      if (frozen && *frozen == i) continue;
      if (gain[i] > best_gain) {
        best_gain = gain[i];
        best = i;
      }
    }
    if (best == n) break;
    x.flip(best);
    ++flips;
    for (auto c : incident[best]) {
      const double w = instance.weight(c);
      // Undo the old contribution, then add the new one.
      for (auto v : instance.vars(c)) gain[v] -= sat[c] ? -w : w;
      sat[c] = !sat[c];
      for (auto v : instance.vars(c)) gain[v] += sat[c] ? -w : w;
    }
  }
  return flips;
}

std::size_t default_rank(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(n)))) + 1;
}

TwoLinSolution solve_2lin(const TwoLinInstance& instance, const TwoLinConfig& config, std::uint64_t seed,
                          const Assignment* advice) {
  if (advice && advice->size() != instance.num_vars()) throw InputError("advice length does not match the instance");
  const std::size_t n = instance.num_vars();
  const KLinInstance hom = homogenize(instance);
  TwoLinSolution out;
  out.rank = config.rank ? config.rank : default_rank(n);
  out.rank = std::max<std::size_t>(out.rank, 2);

  const UnitEmbedding v = solve_relaxation(hom, out.rank, config.sweeps, derive_seed(seed, 0));
  out.relaxation = v.objective();
  out.sweeps_run = v.sweeps_run;
  RoundingResult rounded = hyperplane_round(hom, v, std::max<std::size_t>(config.trials, 1), derive_seed(seed, 1));
  out.rounded_weight = rounded.weight;

  std::vector<Assignment> candidates;
  candidates.push_back(dehomogenize(rounded.x));
  if (advice) candidates.push_back(*advice);
  if (config.local_search) {
    const std::size_t base = candidates.size();
    for (std::size_t c = 0; c < base; ++c) {
      std::vector<Spin> lifted(candidates[c].values().begin(), candidates[c].values().end());
      lifted.push_back(1);
      Assignment h(std::move(lifted));
      single_flip_search(hom, h, n);
      candidates.push_back(dehomogenize(h));
    }
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double w = instance.satisfied_weight(candidates[c]);
    if (c == 0 || w > out.weight) {
      out.weight = w;
      out.x = candidates[c];
    }
  }
  return out;
}

}  // namespace advcsp

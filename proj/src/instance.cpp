#include "advcsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "advcsp/errors.hpp"
#include "advcsp/rng.hpp"

namespace advcsp {

namespace {

void check_spin(int v) {
  if (v != 1 && v != -1) throw InputError("spin value must be +1 or -1, got " + std::to_string(v));
}

template <class T>
void shuffle(std::vector<T>& v, CounterRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Edge multiset under degree-preserving switches. A pairing is "bad" while it
// contains a self-loop or a repeated edge; repair() rewires bad edges against
// uniformly chosen partners until the multiset is simple.
class Pairing {
 public:
  Pairing(std::vector<GraphInstance::Edge> edges, bool bipartite)
      : edges_(std::move(edges)), bipartite_(bipartite) {
    for (const auto& [a, b] : edges_) ++count_[edge_key(a, b)];
  }

  bool repair(CounterRng& rng, std::size_t max_attempts) {
    if (edges_.size() < 2) return simple();
    std::size_t attempts = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      while (bad(e)) {
        if (++attempts > max_attempts) return false;
        const std::size_t f = rng.below(edges_.size());
        if (f == e) continue;
        try_switch(e, f, bipartite_ ? false : rng.sign() < 0);
      }
    }
    return simple();
  }

  std::vector<GraphInstance::Edge> take() { return std::move(edges_); }

 private:
  bool bad(std::size_t e) const {
    const auto [a, b] = edges_[e];
    return a == b || count_.at(edge_key(a, b)) > 1;
  }

  bool simple() const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (bad(e)) return false;
    }
    return true;
  }

  bool present(std::uint32_t a, std::uint32_t b) const {
    auto it = count_.find(edge_key(a, b));
    return it != count_.end() && it->second > 0;
  }

  void remove(std::size_t e) {
    auto it = count_.find(edge_key(edges_[e].first, edges_[e].second));
    if (--it->second == 0) count_.erase(it);
  }

  // (u,v),(a,b) -> (u,b),(a,v) or, when `cross` is set, (u,a),(v,b).
  // Bipartite pairings always use the first form so sides are preserved.
  void try_switch(std::size_t e, std::size_t f, bool cross) {
    const auto [u, v] = edges_[e];
    const auto [a, b] = edges_[f];
    GraphInstance::Edge ne = cross ? GraphInstance::Edge{u, a} : GraphInstance::Edge{u, b};
    GraphInstance::Edge nf = cross ? GraphInstance::Edge{v, b} : GraphInstance::Edge{a, v};
    if (ne.first == ne.second || nf.first == nf.second) return;
    if (edge_key(ne.first, ne.second) == edge_key(nf.first, nf.second)) return;
    if (present(ne.first, ne.second) || present(nf.first, nf.second)) return;
    remove(e);
    remove(f);
    edges_[e] = ne;
    edges_[f] = nf;
    ++count_[edge_key(ne.first, ne.second)];
    ++count_[edge_key(nf.first, nf.second)];
  }

  std::vector<GraphInstance::Edge> edges_;
  bool bipartite_;
  std::unordered_map<std::uint64_t, int> count_;
};

std::vector<GraphInstance::Edge> random_bipartite_regular(const std::vector<std::uint32_t>& left,
                                                          const std::vector<std::uint32_t>& right,
                                                          std::size_t degree, CounterRng& rng) {
  std::vector<std::uint32_t> ls, rs;
  for (auto v : left) ls.insert(ls.end(), degree, v);
  for (auto v : right) rs.insert(rs.end(), degree, v);
  shuffle(rs, rng);
  std::vector<GraphInstance::Edge> edges(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) edges[i] = {ls[i], rs[i]};
  return edges;
}

std::vector<GraphInstance::Edge> random_regular(const std::vector<std::uint32_t>& vertices,
                                                std::size_t degree, CounterRng& rng) {
  std::vector<std::uint32_t> stubs;
  for (auto v : vertices) stubs.insert(stubs.end(), degree, v);
  shuffle(stubs, rng);
  std::vector<GraphInstance::Edge> edges(stubs.size() / 2);
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = {stubs[2 * i], stubs[2 * i + 1]};
  return edges;
}

}  // namespace

Assignment::Assignment(std::size_t n, Spin fill) : values_(n, fill) { check_spin(fill); }

Assignment::Assignment(std::vector<Spin> values) : values_(std::move(values)) {
  for (auto v : values_) check_spin(v);
}

void Assignment::set(std::size_t i, Spin v) {
  check_spin(v);
  values_.at(i) = v;
}

Assignment Assignment::negated() const {
  Assignment out = *this;
  for (auto& v : out.values_) v = static_cast<Spin>(-v);
  return out;
}

KLinInstance::KLinInstance(std::size_t arity, std::size_t num_vars) : arity_(arity), num_vars_(num_vars) {
  if (arity == 0) throw InputError("arity must be at least 1");
  if (num_vars == 0) throw InputError("instance needs at least one variable");
  if (arity > num_vars) throw InputError("arity exceeds the variable count");
}

void KLinInstance::add(std::span<const std::uint32_t> vars, int rhs, double weight) {
  if (vars.size() != arity_) {
    throw InputError("constraint has " + std::to_string(vars.size()) + " variables, arity is " +
                     std::to_string(arity_));
  }
  for (std::size_t a = 0; a < vars.size(); ++a) {
    if (vars[a] >= num_vars_) throw InputError("variable index " + std::to_string(vars[a]) + " out of range");
    for (std::size_t b = 0; b < a; ++b) {
      if (vars[a] == vars[b]) throw InputError("repeated variable " + std::to_string(vars[a]) + " in constraint");
    }
  }
  if (rhs != 1 && rhs != -1) throw InputError("rhs must be +1 or -1, got " + std::to_string(rhs));
  if (!std::isfinite(weight) || weight < 0.0) throw InputError("weight must be finite and nonnegative");
  vars_.insert(vars_.end(), vars.begin(), vars.end());
  rhs_.push_back(static_cast<Spin>(rhs));
  weights_.push_back(weight);
  total_weight_ += weight;
}

void KLinInstance::add(std::initializer_list<std::uint32_t> vars, int rhs, double weight) {
  add(std::span<const std::uint32_t>(vars.begin(), vars.size()), rhs, weight);
}

void KLinInstance::reserve(std::size_t m) {
  vars_.reserve(m * arity_);
  rhs_.reserve(m);
  weights_.reserve(m);
}

bool KLinInstance::satisfied(std::size_t c, const Assignment& x) const {
  int prod = 1;
  for (auto v : vars(c)) prod *= x[v];
  return prod == rhs_[c];
}

Evaluation evaluate(const KLinInstance& instance, const Assignment& x) {
  if (x.size() != instance.num_vars()) {
    throw InputError("assignment has " + std::to_string(x.size()) + " entries, instance has " +
                     std::to_string(instance.num_vars()) + " variables");
  }
  Evaluation out;
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) {
    if (instance.satisfied(c, x)) out.weight += instance.weight(c);
  }
  if (instance.total_weight() > 0.0) out.fraction = out.weight / instance.total_weight();
  return out;
}

GraphInstance::GraphInstance(std::size_t n, std::vector<Edge> edges) : edges_(std::move(edges)), adjacency_(n) {
  if (n == 0) throw InputError("graph needs at least one vertex");
  for (const auto& [a, b] : edges_) {
    if (a >= n || b >= n) throw InputError("edge endpoint out of range");
    if (a == b) throw InputError("self-loop on vertex " + std::to_string(a));
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  const std::size_t d0 = adjacency_[0].size();
  if (std::all_of(adjacency_.begin(), adjacency_.end(), [d0](const auto& nb) { return nb.size() == d0; })) {
    degree_ = d0;
  }
}

GraphInstance GraphInstance::from_klin(const KLinInstance& instance) {
  if (instance.arity() != 2) throw InputError("a graph needs an arity-2 instance");
  std::vector<Edge> edges;
  edges.reserve(instance.num_constraints());
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) {
    if (instance.rhs(c) != -1 || instance.weight(c) != 1.0) {
      throw InputError("constraint " + std::to_string(c) + " is not an unweighted cut constraint");
    }
    const auto v = instance.vars(c);
    edges.emplace_back(v[0], v[1]);
  }
  return GraphInstance(instance.num_vars(), std::move(edges));
}

KLinInstance GraphInstance::to_klin() const {
  KLinInstance out(2, num_vertices());
  out.reserve(edges_.size());
  for (const auto& [a, b] : edges_) out.add({a, b}, -1, 1.0);
  return out;
}

std::size_t GraphInstance::cut_size(const Assignment& x) const {
  if (x.size() != num_vertices()) throw InputError("assignment length does not match the graph");
  std::size_t cut = 0;
  for (const auto& [a, b] : edges_) cut += (x[a] != x[b]);
  return cut;
}

PlantedGraph plant_bipartite_regular(std::size_t n, std::size_t d, double gamma, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InputError("n must be a positive even number");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("gamma must lie in [0, 1]");
  const std::size_t half = n / 2;
  if (2 * d >= n) throw InputError("degree must be below n/2");
  const auto cross = static_cast<std::size_t>(std::ceil((1.0 - gamma) * static_cast<double>(d) - 1e-9));
  const std::size_t intra = d - std::min(cross, d);
  if ((half * intra) % 2 != 0) {
    throw InputError("intra-side degree " + std::to_string(intra) + " is odd on a side of odd size");
  }

  CounterRng rng(seed);
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  shuffle(perm, rng);
  std::vector<std::uint32_t> s_side(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<std::uint32_t> t_side(perm.begin() + static_cast<std::ptrdiff_t>(half), perm.end());
  std::sort(s_side.begin(), s_side.end());
  std::sort(t_side.begin(), t_side.end());

  Assignment planted(n, -1);
  for (auto v : s_side) planted.set(v, 1);

  constexpr int kMaxRestarts = 100;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    std::vector<GraphInstance::Edge> edges;
    bool ok = true;
    if (cross > 0) {
      Pairing p(random_bipartite_regular(s_side, t_side, cross, rng), true);
      const std::size_t budget = 200 * half * cross + 1000;
      ok = p.repair(rng, budget);
      auto e = p.take();
      edges.insert(edges.end(), e.begin(), e.end());
    }
    for (const auto* side : {&s_side, &t_side}) {
      if (!ok || intra == 0) break;
      Pairing p(random_regular(*side, intra, rng), false);
      const std::size_t budget = 200 * half * intra + 1000;
      ok = p.repair(rng, budget);
      auto e = p.take();
      edges.insert(edges.end(), e.begin(), e.end());
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
      return edge_key(x.first, x.second) < edge_key(y.first, y.second);
    });
    for (auto& [a, b] : edges) {
      if (a > b) std::swap(a, b);
    }
    GraphInstance graph(n, std::move(edges));
    const auto value = static_cast<double>(graph.cut_size(planted));
    return PlantedGraph{std::move(graph), std::move(planted), value, gamma};
  }
  throw InputError("could not build a simple planted graph after 100 restarts");
}

PlantedKLin plant_klin(std::size_t n, std::size_t k, std::size_t m, double delta, std::uint64_t seed) {
  if (k == 0 || k > n) throw InputError("arity must lie in [1, n]");
  if (m == 0) throw InputError("at least one constraint is required");
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0, 1]");

  CounterRng rng(seed);
  std::vector<Spin> x(n);
  for (auto& v : x) v = static_cast<Spin>(rng.sign());
  Assignment planted(std::move(x));

  KLinInstance instance(k, n);
  instance.reserve(m);
  std::vector<std::uint32_t> tuple(k);
  double satisfied = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t a = 0; a < k; ++a) {
      std::uint32_t v;
      do {
        v = static_cast<std::uint32_t>(rng.below(n));
      } while (std::find(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(a), v) !=
               tuple.begin() + static_cast<std::ptrdiff_t>(a));
      tuple[a] = v;
    }
    std::sort(tuple.begin(), tuple.end());
    int prod = 1;
    for (auto v : tuple) prod *= planted[v];
    const bool flip = rng.bernoulli(delta);
    instance.add(tuple, flip ? -prod : prod, 1.0);
    if (!flip) satisfied += 1.0;
  }
  return PlantedKLin{std::move(instance), std::move(planted), satisfied, delta};
}

QpMatrix::QpMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

QpMatrix QpMatrix::from_dense(std::size_t n, std::vector<double> values) {
  if (values.size() != n * n) throw InputError("dense matrix must have n*n entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i * n + i] != 0.0) throw InputError("diagonal entry " + std::to_string(i) + " is nonzero");
    for (std::size_t j = 0; j < i; ++j) {
      if (values[i * n + j] != values[j * n + i]) throw InputError("matrix is not symmetric");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("matrix entries must be finite");
  }
  QpMatrix out(n);
  out.a_ = std::move(values);
  return out;
}

void QpMatrix::add_symmetric(std::size_t i, std::size_t j, double v) {
  if (i == j) throw InputError("diagonal entries must stay zero");
  a_[i * n_ + j] += v;
  a_[j * n_ + i] += v;
}

double QpMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double QpMatrix::quadratic_form(std::span<const double> x) const {
  if (x.size() != n_) throw InputError("vector length does not match the matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = &a_[i * n_];
    double r = 0.0;
    for (std::size_t j = 0; j < n_; ++j) r += row[j] * x[j];
    s += x[i] * r;
  }
  return s;
}

double QpMatrix::quadratic_form(const Assignment& x) const {
  std::vector<double> v(x.values().begin(), x.values().end());
  return quadratic_form(v);
}

QpMatrix to_quadratic_matrix(const KLinInstance& instance) {
  if (instance.arity() != 2) throw InputError("quadratic form needs an arity-2 instance");
  QpMatrix a(instance.num_vars());
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) {
    const auto v = instance.vars(c);
    a.add_symmetric(v[0], v[1], instance.rhs(c) * instance.weight(c));
  }
  return a;
}

QpMatrix to_quadratic_matrix(const GraphInstance& graph) {
  QpMatrix a(graph.num_vertices());
  for (const auto& [u, v] : graph.edges()) a.add_symmetric(u, v, -1.0);
  return a;
}

double quadratic_identity_value(const QpMatrix& a, double total_weight, const Assignment& x) {
  return total_weight / 2.0 + a.quadratic_form(x) / 4.0;
}

}  // namespace advcsp

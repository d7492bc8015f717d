#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace advcsp {

using Spin = std::int8_t;

/// A ±1 labeling of n variables.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n, Spin fill = 1);
  explicit Assignment(std::vector<Spin> values);

  std::size_t size() const { return values_.size(); }
  Spin operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, Spin v);
  void flip(std::size_t i) { values_[i] = static_cast<Spin>(-values_[i]); }
  std::span<const Spin> values() const { return values_; }

  Assignment negated() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Spin> values_;
};

/// Read-only view of one parity constraint x_{i1} ... x_{ik} = rhs.
struct ConstraintView {
  std::span<const std::uint32_t> vars;
  Spin rhs;
  double weight;
};

/// Weighted Max k-Lin instance over ±1 variables, stored flat. Parallel
/// constraints are kept verbatim.
class KLinInstance {
 public:
  KLinInstance(std::size_t arity, std::size_t num_vars);

  /// Appends a constraint; throws InputError on out-of-range or repeated
  /// indices, rhs outside {-1,+1}, or a negative / non-finite weight.
  void add(std::span<const std::uint32_t> vars, int rhs, double weight = 1.0);
  void add(std::initializer_list<std::uint32_t> vars, int rhs, double weight = 1.0);
  void reserve(std::size_t m);

  std::size_t arity() const { return arity_; }
  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_constraints() const { return rhs_.size(); }
  double total_weight() const { return total_weight_; }

  ConstraintView constraint(std::size_t c) const {
    return {std::span<const std::uint32_t>(vars_).subspan(c * arity_, arity_), rhs_[c], weights_[c]};
  }
  std::span<const std::uint32_t> vars(std::size_t c) const {
    return std::span<const std::uint32_t>(vars_).subspan(c * arity_, arity_);
  }
  Spin rhs(std::size_t c) const { return rhs_[c]; }
  double weight(std::size_t c) const { return weights_[c]; }

  bool satisfied(std::size_t c, const Assignment& x) const;

  friend bool operator==(const KLinInstance&, const KLinInstance&) = default;

 private:
  std::size_t arity_;
  std::size_t num_vars_;
  std::vector<std::uint32_t> vars_;
  std::vector<Spin> rhs_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
};

struct Evaluation {
  double weight = 0.0;
  double fraction = 0.0;  // weight / W, or 0 for an empty instance
};

Evaluation evaluate(const KLinInstance& instance, const Assignment& x);

/// Unweighted simple-or-multi graph. `degree()` is set iff every vertex has the same degree.
class GraphInstance {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  GraphInstance(std::size_t n, std::vector<Edge> edges);

  /// Accepts arity-2 instances whose constraints are all x_i x_j = -1 with unit weight.
  static GraphInstance from_klin(const KLinInstance& instance);
  KLinInstance to_klin() const;

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const std::uint32_t> neighbors(std::size_t v) const { return adjacency_[v]; }
  std::optional<std::size_t> degree() const { return degree_; }

  /// Number of edges with endpoints on opposite sides of x.
  std::size_t cut_size(const Assignment& x) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::optional<std::size_t> degree_;
};

struct PlantedGraph {
  GraphInstance graph;
  Assignment planted;     // +1 marks S*, -1 marks T*
  double planted_value;   // edges cut by the plant
  double gamma;
};

struct PlantedKLin {
  KLinInstance instance;
  Assignment planted;
  double planted_value;   // satisfied weight of the plant
  double delta;
};

/// Balanced planted partition: every vertex gets ceil((1 - gamma) d) edges to
/// the opposite side and the rest inside its own side. Exact degrees, no
/// self-loops or multi-edges. Throws InputError when the parameters admit no
/// such graph and ConsistencyError if construction fails after 100 restarts.
PlantedGraph plant_bipartite_regular(std::size_t n, std::size_t d, double gamma, std::uint64_t seed);

/// m constraints on uniformly random k-sets with rhs agreeing with a random
/// plant except for an independent delta-fraction of flips; unit weights.
PlantedKLin plant_klin(std::size_t n, std::size_t k, std::size_t m, double delta, std::uint64_t seed);

/// Symmetric, zero-diagonal dense coefficient matrix.
class QpMatrix {
 public:
  explicit QpMatrix(std::size_t n);

  /// Row-major n*n values; throws InputError unless symmetric with zero diagonal.
  static QpMatrix from_dense(std::size_t n, std::vector<double> values);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return std::span<const double>(a_).subspan(i * n_, n_); }

  /// a_ij += v and a_ji += v; i != j.
  void add_symmetric(std::size_t i, std::size_t j, double v);

  double frobenius_norm() const;

  /// <x, A x> summed over ordered pairs.
  double quadratic_form(std::span<const double> x) const;
  double quadratic_form(const Assignment& x) const;

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// Coefficient matrix of the 2-Lin quadratic form: a_ij = sum of rhs * w over
/// constraints on {i, j}. Satisfied weight equals W/2 + <x, A x> / 4.
QpMatrix to_quadratic_matrix(const KLinInstance& instance);
QpMatrix to_quadratic_matrix(const GraphInstance& graph);

/// W/2 + <x, A x>/4.
double quadratic_identity_value(const QpMatrix& a, double total_weight, const Assignment& x);

}  // namespace advcsp

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "advcsp/instance.hpp"

namespace advcsp {

/// Weighted parity constraints of arity 1 (x_i = rhs) and 2 (x_i x_j = rhs).
class TwoLinInstance {
 public:
  struct Unary {
    std::uint32_t var;
    Spin rhs;
    double weight;
  };
  struct Binary {
    std::uint32_t a, b;
    Spin rhs;
    double weight;
  };

  explicit TwoLinInstance(std::size_t num_vars);

  /// Arity 1 or 2 only; anything else throws InputError.
  static TwoLinInstance from_klin(const KLinInstance& instance);

  void add_unary(std::uint32_t var, int rhs, double weight = 1.0);
  void add_binary(std::uint32_t a, std::uint32_t b, int rhs, double weight = 1.0);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_constraints() const { return unary_.size() + binary_.size(); }
  double total_weight() const { return total_weight_; }
  const std::vector<Unary>& unary() const { return unary_; }
  const std::vector<Binary>& binary() const { return binary_; }

  double satisfied_weight(const Assignment& x) const;

 private:
  std::size_t num_vars_;
  std::vector<Unary> unary_;
  std::vector<Binary> binary_;
  double total_weight_ = 0.0;
};

/// Pure 2-Lin instance on n + 1 variables; x_k = s becomes x_k x_n = s.
KLinInstance homogenize(const TwoLinInstance& instance);

/// Drops the reference coordinate, negating everything first when it is -1.
Assignment dehomogenize(const Assignment& x);

/// Rows of unit vectors in R^rank, row-major.
struct UnitEmbedding {
  std::size_t rows = 0;
  std::size_t rank = 0;
  std::vector<double> data;
  std::vector<double> history;  // relaxation objective after initialisation and after each sweep
  std::size_t sweeps_run = 0;

  const double* row(std::size_t i) const { return data.data() + i * rank; }
  double objective() const { return history.empty() ? 0.0 : history.back(); }
};

/// sum_c w_c (1 + rhs_c <v_i, v_j>) / 2 over a pure 2-Lin instance.
double relaxation_objective(const KLinInstance& instance, const UnitEmbedding& v);

/// Block-coordinate ascent v_i <- g_i / |g_i| with g_i = sum_j rhs_ij w_ij v_j,
/// starting from random unit vectors. Rows with g_i = 0 keep their vector. Stops
/// after `sweeps` sweeps or once a sweep gains less than 1e-9 W.
UnitEmbedding solve_relaxation(const KLinInstance& instance, std::size_t rank, std::size_t sweeps,
                               std::uint64_t seed);

struct RoundingResult {
  Assignment x;                       // best trial; ties go to the lowest trial index
  double weight = 0.0;
  std::vector<double> trial_weights;
};

/// Random-hyperplane rounding of a pure 2-Lin embedding: x_i = sign(<v_i, g>)
/// with sign(0) = +1. Trials >= 1.
RoundingResult hyperplane_round(const KLinInstance& instance, const UnitEmbedding& v, std::size_t trials,
                                std::uint64_t seed);

/// Repeatedly flips the single variable with the largest positive gain.
/// Variables listed in `frozen` are never flipped. Returns the number of flips.
std::size_t single_flip_search(const KLinInstance& instance, Assignment& x, std::optional<std::size_t> frozen);

struct TwoLinConfig {
  std::size_t rank = 0;  // 0 selects ceil(sqrt(2n)) + 1
  std::size_t sweeps = 200;
  std::size_t trials = 100;
  bool local_search = true;
};

struct TwoLinSolution {
  Assignment x;
  double weight = 0.0;
  double relaxation = 0.0;
  double rounded_weight = 0.0;  // best hyperplane trial before local search
  std::size_t rank = 0;
  std::size_t sweeps_run = 0;
};

std::size_t default_rank(std::size_t n);

/// Homogenize, relax, round, dehomogenize. The advice candidate (if given) and
/// single-flip improvements of both candidates compete with the rounded one.
TwoLinSolution solve_2lin(const TwoLinInstance& instance, const TwoLinConfig& config, std::uint64_t seed,
                          const Assignment* advice = nullptr);

}  // namespace advcsp

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "advcsp/advice.hpp"
#include "advcsp/instance.hpp"
#include "advcsp/twolin_sdp.hpp"

namespace advcsp {

/// ceil(8 epsilon^-2 ln(1/delta)), at least 1.
std::size_t heavy_threshold(double delta, double epsilon);

/// Constraints containing each unordered variable pair, in sorted pair order.
struct PairIncidence {
  std::size_t threshold = 1;
  std::vector<std::uint64_t> keys;        // (i << 32) | j with i < j, sorted
  std::vector<std::size_t> start;         // CSR offsets into members, size keys.size() + 1
  std::vector<std::uint32_t> members;     // constraint indices, ascending within a pair
  std::vector<std::uint8_t> heavy;        // per pair

  static std::uint64_t key(std::uint32_t i, std::uint32_t j);
  static std::uint32_t first(std::uint64_t k) { return static_cast<std::uint32_t>(k >> 32); }
  static std::uint32_t second(std::uint64_t k) { return static_cast<std::uint32_t>(k); }

  std::size_t size() const { return keys.size(); }
  std::span<const std::uint32_t> constraints(std::size_t p) const {
    return std::span<const std::uint32_t>(members).subspan(start[p], start[p + 1] - start[p]);
  }
  /// Index of pair {i, j}, or size() when no constraint contains both.
  std::size_t find(std::uint32_t i, std::uint32_t j) const;
};

struct LightSets {
  std::vector<std::uint8_t> constraint_heavy;  // per constraint
  std::vector<std::vector<std::uint32_t>> sets;  // L_i: light constraints containing i, ascending
};

struct Classification {
  PairIncidence pairs;
  LightSets light;
};

Classification classify_constraints(const KLinInstance& phi, std::size_t t);

/// One constraint of the reduced 2-Lin instance.
struct PsiConstraint {
  std::uint32_t a = 0;
  std::uint32_t b = 0;     // equals a for unary constraints
  bool unary = false;
  Spin rhs = 1;
  bool always_violated = false;  // its sign sum was zero
  std::uint32_t source = 0;      // representative of this constraint of phi
  std::uint32_t group = 0;       // heavy pair index, or variable i for light ones
  bool from_heavy = false;

  bool satisfied(const Assignment& x) const {
    if (always_violated) return false;
    return unary ? x[a] == rhs : x[a] * x[b] == rhs;
  }
};

struct ConstraintBatch {
  int sign = 0;  // sign of the advice sum: -1, 0 or +1
  std::vector<PsiConstraint> constraints;
};

/// x_i x_j = sigma_ij and x_k = sigma_ij c_ijk for each member; pair rep and
/// unary rep of one source are adjacent in the output.
ConstraintBatch create_h_constraints(std::uint32_t i, std::uint32_t j, std::span<const std::uint32_t> members,
                                     const Assignment& advice, const KLinInstance& phi, std::uint32_t group);

/// |L_i| copies of x_i = sigma_i, one per light source.
ConstraintBatch create_l_constraints(std::uint32_t i, std::span<const std::uint32_t> light, const Assignment& advice,
                                     const KLinInstance& phi);

struct ReducedInstance {
  std::size_t threshold = 1;
  Classification classes;
  std::vector<PsiConstraint> constraints;  // heavy pairs in key order, then light sets by variable
  std::vector<int> pair_sign;              // per pair; 0 for light pairs or a zero sum
  std::vector<int> var_sign;               // per variable; 0 when L_i is empty or the sum is zero
  std::size_t num_vars = 0;

  /// Unit-weight satisfied count, flagged constraints counted as violated.
  double value(const Assignment& x) const;
  std::size_t flagged() const;
  /// Unflagged constraints as a 2-Lin instance; flagged ones add a constant 0.
  TwoLinInstance solvable() const;
};

ReducedInstance build_psi(const KLinInstance& phi, const Assignment& advice, double delta, double epsilon);

struct Max3LinDiagnostics {
  std::size_t threshold = 0;
  std::size_t heavy_pairs = 0;
  std::size_t heavy_sources = 0;
  std::size_t light_sources = 0;
  std::size_t psi_size = 0;
  std::size_t flagged = 0;
  double psi_value = 0.0;               // x_hat on psi, flagged counted violated
  std::size_t unsatisfied_heavy = 0;    // sources of phi violated by x_hat
  std::size_t unsatisfied_light = 0;
  std::size_t unsatisfied_heavy_reps = 0;  // heavy representatives violated by x_hat
  std::size_t implication_failures = 0;    // heavy sources violated although both reps of one pair hold
  bool below_constraint_floor = false;     // m < ln(1/delta) / delta * epsilon^-6 * n
};

struct Max3LinResult {
  Assignment x;
  double weight = 0.0;
  double fraction = 0.0;
  Max3LinDiagnostics diagnostics;
};

Max3LinResult solve_max3lin_with_advice(const KLinInstance& phi, const LabelAdvice& advice, double delta,
                                        std::uint64_t seed, const TwoLinConfig& config = {});

/// Counting bound for an output x_hat given the ground truth x_star:
/// unsat(phi, x_hat) <= heavy reps violated by x_hat + light sources violated
/// by x_star + light reps violated by x_star or x_hat.
struct AccountingAudit {
  std::size_t unsatisfied = 0;
  std::size_t heavy_reps_violated = 0;
  std::size_t light_sources_violated_by_truth = 0;
  std::size_t light_reps_violated = 0;
  bool holds() const { return unsatisfied <= heavy_reps_violated + light_sources_violated_by_truth + light_reps_violated; }
};

AccountingAudit audit_accounting(const KLinInstance& phi, const ReducedInstance& psi, const Assignment& x_hat,
                                 const Assignment& x_star);

/// Heavy sources of phi violated by x while both representatives from some
/// heavy pair hold. Always zero by the product identity.
std::size_t heavy_implication_failures(const KLinInstance& phi, const ReducedInstance& psi, const Assignment& x);

}  // namespace advcsp

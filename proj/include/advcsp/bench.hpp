#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "advcsp/advice.hpp"
#include "advcsp/instance.hpp"
#include "advcsp/maxcut_advice.hpp"
#include "advcsp/twolin_sdp.hpp"

namespace advcsp {

inline const std::vector<std::string> kAlgorithms = {"maxcut-lp", "qp-advice", "max3lin", "twolin-sdp"};

struct SolveOptions {
  MaxCutParams maxcut = MaxCutParams::bench_preset();
  TwoLinConfig twolin;
  double delta = 0.05;  // max3lin noise parameter
};

/// Runs `algorithm` and returns one report object with fields
///   algorithm, requested_algorithm, routed_reason, instance{n,m,k,total_weight,planted_value},
///   advice{epsilon}, seed, value, fraction, diagnostics, wall_time_s.
/// maxcut-lp on an instance that is not an unweighted regular graph is served
/// by qp-advice and the refusal is recorded in routed_reason.
nlohmann::json run_solve(const std::string& algorithm, const KLinInstance& instance, const LabelAdvice& advice,
                         const SolveOptions& options, std::uint64_t seed,
                         std::optional<double> planted_value = std::nullopt);

/// Worker count: hardware concurrency, capped by ADVICE_CSP_THREADS when set.
std::size_t worker_count();

struct BenchRow {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double fraction = 0.0;
  double planted_fraction = 0.0;
  bool pass = false;
  double wall_time_s = 0.0;
};

struct BenchSummary {
  std::string name;
  std::vector<BenchRow> rows;
  std::size_t passes = 0;
  double pass_rate = 0.0;
  double mean_fraction = 0.0;
  double min_pass_rate = 0.0;
  bool pass = false;
  nlohmann::json reports = nlohmann::json::array();
};

/// Config keys (all required unless noted):
///   name; master_seed; seeds;
///   generator {kind: maxcut-planted {n, d, gamma} | klin-planted {n, k, m, delta}};
///   advice {model: label|subset, epsilon};
///   algorithm; params (optional: c1, c2, delta, rank, sweeps, trials);
///   threshold {min_fraction}; min_pass_rate.
/// Trial i uses seed derive_seed(master_seed, i); within a trial the instance,
/// advice and solver use derive_seed(trial, 0), (trial, 1), (trial, 2).
/// Throws InputError naming the first missing key.
BenchSummary run_bench(const nlohmann::json& config, std::size_t threads);

std::string bench_csv(const BenchSummary& summary);
nlohmann::json bench_json(const BenchSummary& summary);

}  // namespace advcsp

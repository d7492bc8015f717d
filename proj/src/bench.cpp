#include "advcsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "advcsp/errors.hpp"
#include "advcsp/io.hpp"
#include "advcsp/max3lin_advice.hpp"
#include "advcsp/qp_advice.hpp"
#include "advcsp/rng.hpp"

namespace advcsp {

using nlohmann::json;

namespace {

// A graph view of the instance when it is an unweighted regular Max-Cut
// instance; otherwise the reason it is not.
std::optional<GraphInstance> regular_graph(const KLinInstance& instance, std::string& reason) {
  if (instance.arity() != 2) {
    reason = "arity is not 2";
    return std::nullopt;
  }
  try {
    GraphInstance g = GraphInstance::from_klin(instance);
    if (!g.degree()) {
      reason = "graph is not regular";
      return std::nullopt;
    }
    return g;
  } catch (const InputError& e) {
    reason = e.what();
    return std::nullopt;
  }
}

json maxcut_diagnostics(const MaxCutResult& r) {
  const auto& d = r.diagnostics;
  return {{"threshold", d.threshold},
          {"slack", d.slack},
          {"confident", r.split.confident.size()},
          {"s_confident", r.split.s_side.size()},
          {"t_confident", r.split.t_side.size()},
          {"uncertain", r.split.uncertain.size()},
          {"lp_feasible", d.lp_feasible},
          {"fallback", d.fallback},
          {"lp_value", d.lp_value},
          {"f_value", d.f_value},
          {"expected_f", d.expected_f},
          {"balance_violations", d.balance_violations},
          {"q_cut_direct", d.q_cut_direct},
          {"q_cut_twice_identity", d.q_cut_twice_identity}};
}

json max3lin_diagnostics(const Max3LinDiagnostics& d) {
  return {{"threshold", d.threshold},
          {"heavy_pairs", d.heavy_pairs},
          {"heavy_sources", d.heavy_sources},
          {"light_sources", d.light_sources},
          {"psi_size", d.psi_size},
          {"flagged", d.flagged},
          {"psi_value", d.psi_value},
          {"unsatisfied_heavy", d.unsatisfied_heavy},
          {"unsatisfied_light", d.unsatisfied_light},
          {"unsatisfied_heavy_reps", d.unsatisfied_heavy_reps},
          {"implication_failures", d.implication_failures},
          {"below_constraint_floor", d.below_constraint_floor}};
}

template <class T>
T need(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError("missing config key '" + where + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError("config key '" + where + key + "' has the wrong type");
  }
}

template <class T>
T maybe(const json& obj, const std::string& key, T fallback) {
  return obj.is_object() && obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

}  // namespace

json run_solve(const std::string& algorithm, const KLinInstance& instance, const LabelAdvice& advice,
               const SolveOptions& options, std::uint64_t seed, std::optional<double> planted_value) {
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), algorithm) == kAlgorithms.end()) {
    throw InputError("unknown algorithm '" + algorithm + "'");
  }
  if (advice.values.size() != instance.num_vars()) throw InputError("advice length does not match the instance");
  const auto t0 = std::chrono::steady_clock::now();

  json report;
  report["requested_algorithm"] = algorithm;
  report["routed_reason"] = nullptr;
  std::string run = algorithm;
  std::optional<GraphInstance> graph;
  if (run == "maxcut-lp") {
    std::string reason;
    graph = regular_graph(instance, reason);
    if (!graph) {
      if (instance.arity() != 2) throw InputError("maxcut-lp needs an arity-2 instance: " + reason);
      report["routed_reason"] = "maxcut-lp refused (" + reason + "); solved with qp-advice";
      run = "qp-advice";
    }
  }
  report["algorithm"] = run;

  Assignment x;
  double value = 0.0, fraction = 0.0;
  json diag = json::object();
  if (run == "maxcut-lp") {
    const MaxCutResult r = solve_maxcut_with_advice(*graph, advice, options.maxcut, seed);
    x = r.side;
    value = r.cut_weight;
    fraction = graph->num_edges() ? value / static_cast<double>(graph->num_edges()) : 0.0;
    diag = maxcut_diagnostics(r);
    diag["c1"] = options.maxcut.c1;
    diag["c2"] = options.maxcut.c2;
  } else if (run == "qp-advice") {
    if (instance.arity() != 2) throw InputError("qp-advice needs an arity-2 instance");
    const TwoLinResult r = solve_2lin_with_advice(instance, advice, planted_value.value_or(0.0));
    x = r.x;
    value = r.weight;
    fraction = r.fraction;
    if (planted_value) diag["guarantee"] = r.guarantee;
  } else if (run == "max3lin") {
    const Max3LinResult r = solve_max3lin_with_advice(instance, advice, options.delta, seed, options.twolin);
    x = r.x;
    value = r.weight;
    fraction = r.fraction;
    diag = max3lin_diagnostics(r.diagnostics);
    diag["delta"] = options.delta;
  } else {
    if (instance.arity() > 2) throw InputError("twolin-sdp needs arity 1 or 2");
    const TwoLinSolution r = solve_2lin(TwoLinInstance::from_klin(instance), options.twolin, seed, &advice.values);
    x = r.x;
    value = r.weight;
    fraction = instance.total_weight() > 0 ? value / instance.total_weight() : 0.0;
    diag = {{"relaxation", r.relaxation}, {"rounded_weight", r.rounded_weight}, {"rank", r.rank},
            {"sweeps_run", r.sweeps_run}};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  report["instance"] = {{"n", instance.num_vars()},
                        {"m", instance.num_constraints()},
                        {"k", instance.arity()},
                        {"total_weight", instance.total_weight()},
                        {"planted_value", planted_value ? json(*planted_value) : json(nullptr)}};
  if (graph && graph->degree()) report["instance"]["d"] = *graph->degree();
  report["advice"] = {{"epsilon", advice.epsilon}};
  report["seed"] = seed;
  report["value"] = value;
  report["fraction"] = fraction;
  report["diagnostics"] = diag;
  report["wall_time_s"] = wall;
  return report;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ADVICE_CSP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
  }
  return n;
}

BenchSummary run_bench(const json& config, std::size_t threads) {
  BenchSummary summary;
  summary.name = need<std::string>(config, "name", "");
  const auto master = need<std::uint64_t>(config, "master_seed", "");
  const auto seeds = need<std::size_t>(config, "seeds", "");
  const json gen = need<json>(config, "generator", "");
  const auto kind = need<std::string>(gen, "kind", "generator.");
  const json adv = need<json>(config, "advice", "");
  const auto model = need<std::string>(adv, "model", "advice.");
  const auto epsilon = need<double>(adv, "epsilon", "advice.");
  const auto algorithm = need<std::string>(config, "algorithm", "");
  const json thr = need<json>(config, "threshold", "");
  const auto min_fraction = need<double>(thr, "min_fraction", "threshold.");
  summary.min_pass_rate = need<double>(config, "min_pass_rate", "");
  const json params = config.contains("params") ? config.at("params") : json::object();

  if (kind != "maxcut-planted" && kind != "klin-planted") throw InputError("unknown generator kind '" + kind + "'");
  if (model != "label" && model != "subset") throw InputError("unknown advice model '" + model + "'");
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), algorithm) == kAlgorithms.end()) {
    throw InputError("unknown algorithm '" + algorithm + "'");
  }
  check_epsilon(epsilon);
  // Read every generator key up front so a missing one fails before any trial runs.
  std::size_t gn = need<std::size_t>(gen, "n", "generator."), gd = 0, gk = 0, gm = 0;
  double gamma = 0.0, gdelta = 0.0;
  if (kind == "maxcut-planted") {
    gd = need<std::size_t>(gen, "d", "generator.");
    gamma = need<double>(gen, "gamma", "generator.");
  } else {
    gk = need<std::size_t>(gen, "k", "generator.");
    gm = need<std::size_t>(gen, "m", "generator.");
    gdelta = need<double>(gen, "delta", "generator.");
  }
  SolveOptions options;
  options.maxcut.c1 = maybe(params, "c1", options.maxcut.c1);
  options.maxcut.c2 = maybe(params, "c2", options.maxcut.c2);
  options.delta = maybe(params, "delta", options.delta);
  options.twolin.rank = maybe(params, "rank", options.twolin.rank);
  options.twolin.sweeps = maybe(params, "sweeps", options.twolin.sweeps);
  options.twolin.trials = maybe(params, "trials", options.twolin.trials);

  summary.rows.resize(seeds);
  std::vector<json> reports(seeds);
  std::vector<std::exception_ptr> errors(seeds);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < seeds; i = next++) {
      try {
        const std::uint64_t trial = derive_seed(master, i);
        std::optional<PlantedGraph> pg;
        std::optional<PlantedKLin> pk;
        if (kind == "maxcut-planted") {
          pg = plant_bipartite_regular(gn, gd, gamma, derive_seed(trial, 0));
        } else {
          pk = plant_klin(gn, gk, gm, gdelta, derive_seed(trial, 0));
        }
        const KLinInstance instance = pg ? pg->graph.to_klin() : pk->instance;
        const Assignment& planted = pg ? pg->planted : pk->planted;
        const double planted_value = pg ? pg->planted_value : pk->planted_value;
        LabelAdvice advice = model == "label"
                                 ? gen_label_advice(planted, epsilon, derive_seed(trial, 1))
                                 : subset_to_label(gen_subset_advice(planted, epsilon, derive_seed(trial, 1)),
                                                   derive_seed(trial, 3));
        json report = run_solve(algorithm, instance, advice, options, derive_seed(trial, 2), planted_value);
        BenchRow& row = summary.rows[i];
        row.index = i;
        row.seed = trial;
        row.value = report["value"].get<double>();
        row.fraction = report["fraction"].get<double>();
        row.planted_fraction = instance.total_weight() > 0 ? planted_value / instance.total_weight() : 0.0;
        row.pass = row.fraction >= min_fraction;
        row.wall_time_s = report["wall_time_s"].get<double>();
        reports[i] = std::move(report);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, seeds));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double sum = 0.0;
  for (const auto& row : summary.rows) {
    summary.passes += row.pass;
    sum += row.fraction;
  }
  summary.pass_rate = seeds ? static_cast<double>(summary.passes) / static_cast<double>(seeds) : 0.0;
  summary.mean_fraction = seeds ? sum / static_cast<double>(seeds) : 0.0;
  summary.pass = seeds > 0 && summary.pass_rate >= summary.min_pass_rate;
  for (auto& r : reports) summary.reports.push_back(std::move(r));
  return summary;
}

std::string bench_csv(const BenchSummary& summary) {
  std::ostringstream out;
  out << "index,seed,value,fraction,planted_fraction,pass,wall_time_s\n";
  for (const auto& r : summary.rows) {
    out << r.index << ',' << r.seed << ',' << format_number(r.value) << ',' << format_number(r.fraction) << ','
        << format_number(r.planted_fraction) << ',' << (r.pass ? 1 : 0) << ',' << format_number(r.wall_time_s)
        << '\n';
  }
  return out.str();
}

json bench_json(const BenchSummary& summary) {
  return {{"name", summary.name},
          {"trials", summary.rows.size()},
          {"passes", summary.passes},
          {"pass_rate", summary.pass_rate},
          {"min_pass_rate", summary.min_pass_rate},
          {"mean_fraction", summary.mean_fraction},
          {"pass", summary.pass}};
}

}  // namespace advcsp

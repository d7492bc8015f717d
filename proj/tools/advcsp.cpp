// Command-line front end. Reports go to stdout as JSON, messages to stderr.
// Exit codes: 0 success, 1 input error, 2 budget refusal, 3 consistency failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "advcsp/bench.hpp"
#include "advcsp/enumeration.hpp"
#include "advcsp/errors.hpp"
#include "advcsp/io.hpp"
#include "advcsp/qp_advice.hpp"
#include "advcsp/reduction.hpp"
#include "advcsp/rng.hpp"
#include "advcsp/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace advcsp;

namespace {

void refuse_existing(const std::string& path, bool force) {
  if (!force && fs::exists(path)) throw InputError("'" + path + "' exists; pass --force to overwrite");
}

LabelAdvice load_label_advice(const std::string& path, std::uint64_t seed) {
  Advice a = read_advice(path);
  if (auto* label = std::get_if<LabelAdvice>(&a)) return std::move(*label);
  return subset_to_label(std::get<SubsetAdvice>(a), derive_seed(seed, 99));
}

struct GenArgs {
  std::string kind;
  std::size_t n = 0, d = 0, k = 3, m = 0;
  double gamma = 0.0, delta = 0.0;
  std::uint64_t seed = 1;
  std::string out;
  double advice_epsilon = 0.0;
  std::string advice_model = "label";
  bool force = false;
};

int cmd_gen(const GenArgs& a) {
  const std::string prefix = a.out.empty() ? a.kind + "-" + std::to_string(a.seed) : a.out;
  const std::string inst_path = prefix + ".instance", assign_path = prefix + ".assign", adv_path = prefix + ".advice";
  refuse_existing(inst_path, a.force);
  refuse_existing(assign_path, a.force);
  if (a.advice_epsilon > 0) refuse_existing(adv_path, a.force);

  KLinInstance instance(1, 1);
  Assignment planted;
  double planted_value = 0.0;
  if (a.kind == "maxcut-planted") {
    PlantedGraph g = plant_bipartite_regular(a.n, a.d, a.gamma, a.seed);
    instance = g.graph.to_klin();
    planted = g.planted;
    planted_value = g.planted_value;
  } else if (a.kind == "klin-planted") {
    PlantedKLin p = plant_klin(a.n, a.k, a.m, a.delta, a.seed);
    instance = std::move(p.instance);
    planted = p.planted;
    planted_value = p.planted_value;
  } else {
    throw InputError("unknown kind '" + a.kind + "'");
  }
  write_instance(inst_path, instance);
  write_assignment(assign_path, planted);
  json report = {{"command", "gen"},        {"kind", a.kind},     {"seed", a.seed},
                 {"instance", inst_path},   {"assignment", assign_path},
                 {"planted_value", planted_value},
                 {"planted_fraction", instance.total_weight() > 0 ? planted_value / instance.total_weight() : 0.0}};
  if (a.advice_epsilon > 0) {
    const std::uint64_t aseed = derive_seed(a.seed, 1);
    if (a.advice_model == "label") {
      write_advice(adv_path, gen_label_advice(planted, a.advice_epsilon, aseed));
    } else if (a.advice_model == "subset") {
      write_advice(adv_path, gen_subset_advice(planted, a.advice_epsilon, aseed));
    } else {
      throw InputError("unknown advice model '" + a.advice_model + "'");
    }
    report["advice"] = adv_path;
    report["advice_seed"] = aseed;
  }
  std::cout << report.dump() << '\n';
  return 0;
}

struct SolveArgs {
  std::string algorithm, instance, advice;
  std::uint64_t seed = 1;
  SolveOptions options;
  double planted_value = -1.0;
};

int cmd_solve(const SolveArgs& a, const std::string& echo) {
  const KLinInstance instance = read_instance(a.instance);
  const LabelAdvice advice = load_label_advice(a.advice, a.seed);
  const std::optional<double> planted = a.planted_value >= 0 ? std::optional<double>(a.planted_value) : std::nullopt;
  json report = run_solve(a.algorithm, instance, advice, a.options, a.seed, planted);
  report["command"] = echo;
  report["seed_ledger"] = {{"solver_seed", a.seed}, {"advice_conversion_seed", derive_seed(a.seed, 99)}};
  if (!report["routed_reason"].is_null()) std::cerr << report["routed_reason"].get<std::string>() << '\n';
  if (report["diagnostics"].value("fallback", false)) std::cerr << "LP infeasible; used the sign fallback\n";
  std::cout << report.dump() << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, bool force) {
  std::ifstream in(config_path);
  if (!in) throw InputError("cannot open '" + config_path + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  const BenchSummary summary = run_bench(config, worker_count());
  fs::create_directories(out_dir);
  const std::string csv = (fs::path(out_dir) / (summary.name + ".csv")).string();
  const std::string js = (fs::path(out_dir) / (summary.name + ".json")).string();
  refuse_existing(csv, force);
  refuse_existing(js, force);
  std::ofstream(csv) << bench_csv(summary);
  json out = bench_json(summary);
  out["config"] = config;
  out["runs"] = summary.reports;
  std::ofstream(js) << out.dump(2) << '\n';
  json brief = bench_json(summary);
  brief["csv"] = csv;
  brief["json"] = js;
  std::cout << brief.dump() << '\n';
  return 0;
}

int cmd_enumerate(const std::string& inst_path, double epsilon, const std::string& inner_name, std::uint64_t seed,
                  std::uint64_t cap) {
  const KLinInstance instance = read_instance(inst_path);
  SubsetSolver inner;
  if (inner_name == "qp-advice") {
    if (instance.arity() != 2) throw InputError("qp-advice inner solver needs arity 2");
    inner = via_label_advice([&](const LabelAdvice& adv) { return solve_2lin_with_advice(instance, adv).x; });
  } else if (inner_name == "twolin-sdp") {
    if (instance.arity() > 2) throw InputError("twolin-sdp inner solver needs arity 1 or 2");
    const TwoLinInstance two = TwoLinInstance::from_klin(instance);
    inner = [&two](const SubsetAdvice& adv, std::uint64_t s) {
      const LabelAdvice label = subset_to_label(adv, s);
      return solve_2lin(two, TwoLinConfig{}, s, &label.values).x;
    };
  } else {
    throw InputError("unknown inner solver '" + inner_name + "'");
  }
  const auto projected = projected_runs(instance.num_vars(), epsilon);
  const EnumerationResult r = enumerate_solve(instance, epsilon, inner, seed, cap);
  json report = {{"command", "enumerate"},
                 {"inner", inner_name},
                 {"epsilon", epsilon},
                 {"max_subset_size", max_subset_size(instance.num_vars(), epsilon)},
                 {"projected_runs", *projected},
                 {"runs", r.runs},
                 {"value", r.value},
                 {"fraction", instance.total_weight() > 0 ? r.value / instance.total_weight() : 0.0},
                 {"best_ordinal", r.ordinal},
                 {"best_subset", r.advice.indices},
                 {"seed", seed}};
  std::cout << report.dump() << '\n';
  return 0;
}

int cmd_reduce(const std::string& inst_path, std::size_t t, const std::string& out, const std::string& assign_path,
               bool force) {
  const KLinInstance phi = read_instance(inst_path);
  const FourLinLift lift = three_to_four_lin(phi, t);
  const bool counts = lift.instance.num_vars() == phi.num_vars() + t &&
                      lift.instance.num_constraints() == phi.num_constraints() * t;
  json report = {{"command", "reduce"},
                 {"t", t},
                 {"variables", lift.instance.num_vars()},
                 {"constraints", lift.instance.num_constraints()},
                 {"counting_ok", counts}};
  if (!out.empty()) {
    refuse_existing(out, force);
    write_instance(out, lift.instance);
    std::stringstream round;
    write_instance(round, lift.instance);
    report["round_trip_ok"] = parse_instance(round) == lift.instance;
    report["output"] = out;
  }
  bool ok = counts && report.value("round_trip_ok", true);
  if (!assign_path.empty()) {
    const Assignment sigma = read_assignment(assign_path);
    const double base = evaluate(phi, sigma).weight;
    const double lifted = evaluate(lift.instance, lift_assignment(sigma, t)).weight;
    const Projection back = project_assignment(lift_assignment(sigma, t), phi);
    report["fraction"] = evaluate(phi, sigma).fraction;
    report["lifted_fraction"] = evaluate(lift.instance, lift_assignment(sigma, t)).fraction;
    report["completeness_ok"] = lifted == base * static_cast<double>(t);
    report["projection_recovers"] = back.x == sigma;
    ok = ok && lifted == base * static_cast<double>(t);
  }
  std::cout << report.dump() << '\n';
  if (!ok) throw ConsistencyError("reduction check failed");
  return 0;
}

int cmd_verify(const std::string& suite, std::size_t seeds, std::uint64_t master) {
  const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  int code = 0;
  json all = json::array();
  for (const auto& name : names) {
    const SuiteReport r = run_suite(name, seeds, master);
    all.push_back({{"suite", r.suite}, {"checks", r.checks}, {"failures", r.failures}, {"passed", r.passed()}});
    if (!r.passed()) {
      std::cerr << name << ": " << r.failures << " of " << r.checks << " checks failed; first: " << r.first_failure
                << '\n';
      all.back()["first_failure"] = r.first_failure;
      code = 3;
    }
  }
  std::cout << all.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint satisfaction solvers with noisy advice"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a planted instance, its planted assignment and optional advice");
  g->add_option("kind", gen.kind, "maxcut-planted or klin-planted")->required();
  g->add_option("--n", gen.n, "variables / vertices")->required();
  g->add_option("--d", gen.d, "degree (maxcut-planted)");
  g->add_option("--gamma", gen.gamma, "intra-side edge fraction (maxcut-planted)");
  g->add_option("--k", gen.k, "arity (klin-planted)");
  g->add_option("--m", gen.m, "constraints (klin-planted)");
  g->add_option("--delta", gen.delta, "rhs flip rate (klin-planted)");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--out", gen.out, "output prefix; writes <prefix>.instance/.assign/.advice");
  g->add_option("--advice-epsilon", gen.advice_epsilon, "also write advice with this epsilon");
  g->add_option("--advice-model", gen.advice_model, "label or subset");
  g->add_flag("--force", gen.force, "overwrite existing files");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run one algorithm and print a JSON report");
  s->add_option("--algorithm", solve.algorithm, "maxcut-lp, qp-advice, max3lin or twolin-sdp")->required();
  s->add_option("--instance", solve.instance, "instance file")->required();
  s->add_option("--advice", solve.advice, "advice file")->required();
  s->add_option("--seed", solve.seed, "solver seed");
  s->add_option("--c1", solve.options.maxcut.c1, "maxcut-lp threshold coefficient");
  s->add_option("--c2", solve.options.maxcut.c2, "maxcut-lp slack coefficient");
  s->add_option("--delta", solve.options.delta, "max3lin noise parameter");
  s->add_option("--rank", solve.options.twolin.rank, "relaxation rank (0 = automatic)");
  s->add_option("--sweeps", solve.options.twolin.sweeps, "relaxation sweeps");
  s->add_option("--trials", solve.options.twolin.trials, "hyperplane trials");
  s->add_option("--planted-value", solve.planted_value, "known planted value, used in reported guarantees");

  std::string config, out_dir = ".";
  bool bench_force = false;
  auto* b = app.add_subcommand("bench", "Run a benchmark config; writes <name>.csv and <name>.json");
  b->add_option("--config", config, "JSON config")->required();
  b->add_option("--out-dir", out_dir, "output directory");
  b->add_flag("--force", bench_force, "overwrite existing outputs");

  std::string en_instance, en_inner = "qp-advice";
  double en_eps = 0.1;
  std::uint64_t en_seed = 1, en_cap = kDefaultRunCap;
  auto* e = app.add_subcommand("enumerate", "Best solution over all subset advice of size <= 2 epsilon n");
  e->add_option("--instance", en_instance, "instance file")->required();
  e->add_option("--epsilon", en_eps, "advice rate")->required();
  e->add_option("--inner", en_inner, "qp-advice or twolin-sdp");
  e->add_option("--seed", en_seed, "master seed");
  e->add_option("--cap", en_cap, "maximum number of inner runs");

  std::string rd_instance, rd_out, rd_assign;
  std::size_t rd_t = 1;
  bool rd_force = false;
  auto* r = app.add_subcommand("reduce", "Lift a 3-Lin instance to 4-Lin and check the counting identities");
  r->add_option("--instance", rd_instance, "3-Lin instance file")->required();
  r->add_option("--t", rd_t, "number of new variables")->required();
  r->add_option("--out", rd_out, "write the lifted instance here");
  r->add_option("--assignment", rd_assign, "also check completeness for this assignment");
  r->add_flag("--force", rd_force, "overwrite the output");

  std::string suite = "all";
  std::size_t seeds = 20;
  std::uint64_t master = 1;
  auto* v = app.add_subcommand("verify", "Run invariant suites; nonzero exit on the first failing suite");
  v->add_option("--suite", suite, "suite name or all");
  v->add_option("--seeds", seeds, "random cases per suite");
  v->add_option("--master-seed", master, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  std::string echo;
  for (int i = 0; i < argc; ++i) echo += (i ? " " : "") + std::string(argv[i]);
  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve, echo);
    if (*b) return cmd_bench(config, out_dir, bench_force);
    if (*e) return cmd_enumerate(en_instance, en_eps, en_inner, en_seed, en_cap);
    if (*r) return cmd_reduce(rd_instance, rd_t, rd_out, rd_assign, rd_force);
    if (*v) return cmd_verify(suite, seeds, master);
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const BudgetError& err) {
    std::cerr << "refused: " << err.what() << '\n';
    return 2;
  } catch (const ConsistencyError& err) {
    std::cerr << "consistency failure: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  }
  return 0;
}

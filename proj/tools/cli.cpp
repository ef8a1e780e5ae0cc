#include "cli.hpp"

#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "colsparse/errors.hpp"
#include "colsparse/harness.hpp"
#include "colsparse/io.hpp"
#include "colsparse/kcspip.hpp"
#include "colsparse/lp.hpp"
#include "colsparse/sksp.hpp"
#include "colsparse/ufptree.hpp"
#include "json.hpp"

namespace colsparse::cli {
namespace {

using nlohmann::json;

struct Config {
  std::string instance;
  std::string x_path;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  std::size_t jobs = 1;
  bool csv = false;
  bool plain_lp = false;

  // k-CS-PIP and baselines
  std::optional<double> alpha;
  std::optional<std::size_t> ell;
  std::optional<std::size_t> d;
  std::optional<double> epsilon;

  // SKSP
  std::optional<std::size_t> chances;
  std::uint64_t sim_budget = 0;
  std::size_t refinements = 3;

  // generators and schedules
  std::size_t k = 2;
  std::string k_text;
  double gen_eps = 1e-7;
  std::size_t n = 10;
  std::size_t m = 10;
  std::size_t k_max = 3;
  std::size_t scenarios = 2;
  std::size_t vertices = 16;
  std::size_t demands = 8;
  std::size_t max_capacity = 3;
  bool decreasing = false;
  double grid = 1e-6;
  std::vector<std::size_t> ks{5, 10, 20, 40};
};

std::uint64_t default_seed() {
  const char* env = std::getenv("COLSPARSE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const std::string text(env);
    const auto value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError(std::string("COLSPARSE_SEED is not an unsigned integer: ") + env);
  }
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
  }
}

AnyInstance load_instance(const Config& cfg) {
  if (cfg.instance.empty()) throw ValidationError("--instance is required");
  return instance_from_json(read_file(cfg.instance));
}

PackingInstance as_packing(const AnyInstance& any) {
  if (const auto* p = std::get_if<PackingInstance>(&any)) return *p;
  if (const auto* h = std::get_if<Hypergraph>(&any)) return to_packing_instance(*h);
  if (const auto* t = std::get_if<TreeNetwork>(&any)) return to_packing_instance(*t);
  return std::get<StochasticInstance>(any).expected_instance();
}

void check_valid(const AnyInstance& any) {
  ValidationReport rep;
  if (const auto* p = std::get_if<PackingInstance>(&any)) rep = validate_instance(*p);
  if (const auto* s = std::get_if<StochasticInstance>(&any)) rep = validate_stochastic(*s);
  if (const auto* h = std::get_if<Hypergraph>(&any)) rep = validate_hypergraph(*h);
  if (const auto* t = std::get_if<TreeNetwork>(&any)) rep = validate_tree(*t);
  if (!rep.ok()) throw ValidationError("invalid instance: " + rep.violations.front());
}

KcsParams kcs_params(const Config& cfg, std::size_t k) {
  KcsParams p = KcsParams::defaults(k);
  if (cfg.alpha) {
    p.alpha = *cfg.alpha;
    p.ell = default_ell(k, p.alpha);
    p.d = default_d(p.alpha);
  }
  if (cfg.ell) p.ell = *cfg.ell;
  if (cfg.d) p.d = *cfg.d;
  p.epsilon = cfg.epsilon;
  p.validate();
  return p;
}

int cmd_solve_lp(const Config& cfg, std::ostream& out) {
  const AnyInstance any = load_instance(cfg);
  check_valid(any);
  emit(cfg, to_json(solve_packing_lp(as_packing(any), !cfg.plain_lp)), out);
  return 0;
}

int cmd_round(const Config& cfg, const std::string& name, std::ostream& out) {
  const auto algorithm = parse_algorithm(name);
  if (!algorithm) throw ValidationError("unknown algorithm '" + name + "'");
  ExperimentSpec spec;
  spec.algorithm = *algorithm;
  spec.instance = load_instance(cfg);
  check_valid(spec.instance);
  if (!cfg.x_path.empty()) spec.x = solution_from_json(read_file(cfg.x_path)).x;
  spec.trials = cfg.trials;
  spec.seed = cfg.seed;
  spec.jobs = cfg.jobs;

  switch (*algorithm) {
    case Algorithm::Kcspip:
      if (const auto* p = std::get_if<PackingInstance>(&spec.instance)) {
        spec.kcs = kcs_params(cfg, std::max<std::size_t>(1, column_sparsity(*p)));
      }
      break;
    case Algorithm::Bkns:
      if (cfg.alpha) spec.bkns_alpha = *cfg.alpha;
      break;
    case Algorithm::Sksp:
      if (cfg.chances) {
        const auto* s = std::get_if<StochasticInstance>(&spec.instance);
        spec.schedule = compute_schedule(*cfg.chances, s ? std::optional(s->sparsity()) : std::nullopt);
      }
      spec.plan.sim_budget = cfg.sim_budget;
      spec.plan.refinements = cfg.refinements;
      break;
    case Algorithm::Hypermatch:
    case Algorithm::HypermatchLinear:
      if (cfg.alpha) spec.hm_alpha = *cfg.alpha;
      break;
    case Algorithm::Ufp:
      if (cfg.alpha) spec.ufp = UfpParams::from_alpha(*cfg.alpha, cfg.sim_budget);
      else if (cfg.sim_budget > 0) {
        UfpParams p = UfpParams::from_alpha(optimize_alpha(1e-6).alpha, cfg.sim_budget);
        spec.ufp = p;
      }
      break;
  }

  const RoundingReport report = empirical_ratio(spec);
  if (report.violations > 0) {
    throw InternalError("rounded set violated a capacity in " + std::to_string(report.violations) +
                        " trial(s); first replayable trial " +
                        std::to_string(report.violating_trials.front()));
  }
  emit(cfg, cfg.csv ? to_csv(report) : to_json(report), out);
  return 0;
}

int cmd_gen(const Config& cfg, const std::string& family, std::ostream& out) {
  if (family == "gap") {
    emit(cfg, to_json(gen_gap_instance(cfg.k, cfg.gen_eps)), out);
  } else if (family == "kcs") {
    emit(cfg, to_json(gen_random_kcs(cfg.n, cfg.m, cfg.k, cfg.seed)), out);
  } else if (family == "hyper") {
    emit(cfg, to_json(gen_random_hypergraph(cfg.m, cfg.n, cfg.k_max, cfg.seed)), out);
  } else if (family == "sksp") {
    emit(cfg, to_json(gen_sksp_instance(cfg.n, cfg.m, cfg.k, cfg.scenarios, cfg.seed)), out);
  } else if (family == "tree") {
    emit(cfg, to_json(gen_random_tree(cfg.vertices, cfg.demands, cfg.max_capacity, cfg.decreasing,
                                      cfg.seed)),
         out);
  } else {
    throw ValidationError("unknown family '" + family + "'");
  }
  return 0;
}

int cmd_oracle(const Config& cfg, const std::string& kind, std::ostream& out) {
  const AnyInstance any = load_instance(cfg);
  check_valid(any);
  if (kind == "opt") {
    if (std::holds_alternative<StochasticInstance>(any)) {
      throw ValidationError("oracle opt needs a deterministic instance");
    }
    emit(cfg, to_json(brute_force_opt(as_packing(any))), out);
    return 0;
  }
  if (kind == "inclusion") {
    const auto* inst = std::get_if<PackingInstance>(&any);
    if (inst == nullptr) throw ValidationError("oracle inclusion needs a packing instance");
    const FractionalSolution x = cfg.x_path.empty() ? solve_packing_lp(*inst, true)
                                                    : solution_from_json(read_file(cfg.x_path));
    const KcsParams p = kcs_params(cfg, std::max<std::size_t>(1, column_sparsity(*inst)));
    json params{{"alpha", p.alpha}, {"ell", p.ell}, {"d", p.d}, {"palette", p.palette()}};
    if (p.epsilon) params["epsilon"] = *p.epsilon;
    const json doc{{"x", x.x},
                   {"params", params},
                   {"probabilities", exact_inclusion_probabilities(*inst, x, p)}};
    emit(cfg, doc.dump(2) + "\n", out);
    return 0;
  }
  throw ValidationError("unknown oracle '" + kind + "'");
}

int cmd_schedule(const Config& cfg, std::ostream& out) {
  std::optional<std::size_t> k;
  if (!cfg.k_text.empty() && cfg.k_text != "inf") {
    try {
      std::size_t used = 0;
      k = std::stoull(cfg.k_text, &used);
      if (used != cfg.k_text.size()) throw std::invalid_argument(cfg.k_text);
    } catch (const std::exception&) {
      throw ValidationError("--k must be a positive integer or 'inf'");
    }
  }
  emit(cfg, to_json(compute_schedule(cfg.chances.value_or(2), k)), out);
  return 0;
}

int cmd_optimize_ufp(const Config& cfg, std::ostream& out) {
  const AlphaOptimum opt = optimize_alpha(cfg.grid);
  const UfpParams p = UfpParams::from_alpha(opt.alpha);
  const json doc{{"alpha", opt.alpha},
                 {"beta", p.beta},
                 {"balance", opt.balance},
                 {"inverseBalance", 1.0 / opt.balance},
                 {"grid", cfg.grid}};
  emit(cfg, doc.dump(2) + "\n", out);
  return 0;
}

int cmd_trend(const Config& cfg, std::ostream& out) {
  emit(cfg, to_json(asymptotic_trend(cfg.ks, cfg.trials, cfg.seed, cfg.jobs)), out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Randomized rounding for column-sparse packing programs", "colsparse"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  try {
    cfg.seed = default_seed();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", cfg.out, "Write output to this file instead of stdout");
    sub->add_option("--seed", cfg.seed, "Master seed (default: $COLSPARSE_SEED or 0)");
  };
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("-i,--instance", cfg.instance, "Instance JSON file")->required();
  };
  auto add_kcs = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "Sampling multiplier")->check(CLI::PositiveNumber);
    sub->add_option("--ell", cfg.ell, "Coefficient class threshold");
    sub->add_option("--d", cfg.d, "Out-degree bound of the conflict graph");
    sub->add_option("--eps", cfg.epsilon, "Use the randomized coloring with this exponent");
  };

  auto* solve = app.add_subcommand("solve-lp", "Solve the LP relaxation of an instance");
  add_instance(solve);
  add_common(solve);
  solve->add_flag("--plain", cfg.plain_lp, "Omit the big-item strengthening rows");

  std::string algorithm;
  auto* round = app.add_subcommand("round", "Run rounding trials and report inclusion statistics");
  round->add_option("algorithm", algorithm, "kcspip | bkns | sksp | hm | hm-linear | ufp")->required();
  add_instance(round);
  add_common(round);
  add_kcs(round);
  round->add_option("--x", cfg.x_path, "Fractional solution JSON (default: solve the LP)");
  round->add_option("--trials", cfg.trials, "Number of trials")->check(CLI::PositiveNumber);
  round->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  round->add_option("--T", cfg.chances, "Number of chances (sksp)")->check(CLI::PositiveNumber);
  round->add_option("--sim-budget", cfg.sim_budget, "Simulations per attenuation estimate");
  round->add_option("--refinements", cfg.refinements, "Fixed-point passes for attenuation (sksp)");
  round->add_flag("--csv", cfg.csv, "Emit the per-item table as CSV");

  std::string family;
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("family", family, "gap | kcs | hyper | sksp | tree")->required();
  add_common(gen);
  gen->add_option("--k", cfg.k, "Column sparsity (gap, kcs, sksp)");
  gen->add_option("--eps", cfg.gen_eps, "Off-diagonal coefficient (gap)");
  gen->add_option("--n", cfg.n, "Items or edges");
  gen->add_option("--m", cfg.m, "Rows or vertices");
  gen->add_option("--k-max", cfg.k_max, "Largest hyperedge (hyper)");
  gen->add_option("--scenarios", cfg.scenarios, "Outcomes per item (sksp)");
  gen->add_option("--vertices", cfg.vertices, "Tree vertices (tree)");
  gen->add_option("--demands", cfg.demands, "Demand pairs (tree)");
  gen->add_option("--max-capacity", cfg.max_capacity, "Largest edge capacity (tree)");
  gen->add_flag("--decreasing", cfg.decreasing, "Capacities shrink with depth (tree)");

  std::string oracle_kind;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum or exact inclusion probabilities");
  oracle->add_option("kind", oracle_kind, "opt | inclusion")->required();
  add_instance(oracle);
  add_common(oracle);
  add_kcs(oracle);
  oracle->add_option("--x", cfg.x_path, "Fractional solution JSON (default: solve the LP)");

  auto* schedule = app.add_subcommand("schedule", "Per-chance sampling and attenuation targets");
  add_common(schedule);
  schedule->add_option("--T", cfg.chances, "Number of chances")->check(CLI::PositiveNumber);
  schedule->add_option("--k", cfg.k_text, "Column sparsity, or 'inf' for the limit schedule");

  auto* opt_ufp = app.add_subcommand("optimize-ufp", "Grid search for the UFP sampling multiplier");
  add_common(opt_ufp);
  opt_ufp->add_option("--grid", cfg.grid, "Grid spacing, at most 1e-5");

  auto* trend = app.add_subcommand("trend", "Guarantee ratios across k (reported, not asserted)");
  add_common(trend);
  trend->add_option("--ks", cfg.ks, "Values of k")->delimiter(',');
  trend->add_option("--trials", cfg.trials, "Trials per point")->check(CLI::PositiveNumber);
  trend->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return cmd_solve_lp(cfg, out);
    if (round->parsed()) return cmd_round(cfg, algorithm, out);
    if (gen->parsed()) return cmd_gen(cfg, family, out);
    if (oracle->parsed()) return cmd_oracle(cfg, oracle_kind, out);
    if (schedule->parsed()) return cmd_schedule(cfg, out);
    if (opt_ufp->parsed()) return cmd_optimize_ufp(cfg, out);
    if (trend->parsed()) return cmd_trend(cfg, out);
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 1;
}

}  // namespace colsparse::cli

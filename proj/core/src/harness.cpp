#include "colsparse/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "colsparse/errors.hpp"
#include "colsparse/lp.hpp"
#include "colsparse/montecarlo.hpp"
#include "colsparse/parallel.hpp"

namespace colsparse {

PackingInstance gen_gap_instance(std::size_t k, double eps) {
  if (k < 2) throw ParamError("gap instance needs k >= 2");
  const std::size_t n = 2 * k - 1;
  if (!(eps > 0.0 && eps < 1.0 / (10.0 * static_cast<double>(n) * static_cast<double>(k)))) {
    throw ParamError("gap instance needs 0 < eps < 1/(10 n k)");
  }
  std::vector<std::vector<Entry>> columns(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Row i holds eps for j in {i+1, ..., i+k-1}, i.e. i in {j-k+1, ..., j-1} mod n.
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) {
        columns[j].push_back({i, 1.0});
      } else if ((j + n - i) % n < k) {
        columns[j].push_back({i, eps});
      }
    }
  }
  return PackingInstance::with_unit_capacities(n, std::move(columns), std::vector<double>(n, 1.0));
}

OptResult brute_force_opt(const PackingInstance& inst, std::size_t max_items) {
  if (inst.n > max_items) {
    throw SizeError("brute force supports at most " + std::to_string(max_items) +
                    " items, got " + std::to_string(inst.n));
  }
  const auto report = validate_instance(inst);
  if (!report.ok()) throw ValidationError("invalid instance: " + report.violations.front());
  const std::size_t n = inst.n;
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] + inst.weights[j];

  std::vector<double> usage(inst.m, 0.0);
  std::vector<std::size_t> current;
  OptResult best;
  double value = 0.0;
  auto fits = [&](std::size_t j) {
    for (const Entry& e : inst.columns[j]) {
      if (usage[e.row] + e.coeff > inst.capacities[e.row] + kCapacityTolerance) return false;
    }
    return true;
  };
  // Every node is a complete candidate: items past the current depth are left out.
  std::function<void(std::size_t)> dfs = [&](std::size_t j) {
    if (value > best.value) {
      best.value = value;
      best.items = ItemSet::from_sorted(current);
    }
    if (j == n || value + suffix[j] <= best.value) return;
    if (fits(j)) {
      for (const Entry& e : inst.columns[j]) usage[e.row] += e.coeff;
      value += inst.weights[j];
      current.push_back(j);
      dfs(j + 1);
      current.pop_back();
      value -= inst.weights[j];
      for (const Entry& e : inst.columns[j]) usage[e.row] -= e.coeff;
    }
    dfs(j + 1);
  };
  dfs(0);
  best.value = total_weight(inst, best.items);
  return best;
}

PackingInstance gen_random_kcs(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k > m) throw ParamError("sparsity k cannot exceed the row count m");
  Rng rng(seed, 0x6B6373);
  std::vector<std::vector<Entry>> columns(n);
  std::vector<double> weights(n);
  std::vector<std::size_t> rows(m);
  for (std::size_t j = 0; j < n; ++j) {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (std::size_t t = 0; t < k; ++t) std::swap(rows[t], rows[t + rng.below(m - t)]);
    std::vector<std::size_t> pick(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(pick.begin(), pick.end());
    for (std::size_t r : pick) columns[j].push_back({r, 1.0 - rng.uniform()});
    weights[j] = 1.0 - rng.uniform();
  }
  return PackingInstance::with_unit_capacities(m, std::move(columns), std::move(weights));
}

namespace {

std::vector<std::size_t> distinct_sample(Rng& rng, std::size_t universe, std::size_t count) {
  std::vector<std::size_t> all(universe);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t t = 0; t < count; ++t) std::swap(all[t], all[t + rng.below(universe - t)]);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

Hypergraph gen_random_hypergraph(std::size_t m, std::size_t n, std::size_t k_max,
                                 std::uint64_t seed) {
  if (k_max < 1 || k_max > m) throw ParamError("edge size bound must lie in [1, m]");
  Rng rng(seed, 0x6879);
  Hypergraph h;
  h.m = m;
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t size = 1 + rng.below(k_max);
    h.edges.push_back({distinct_sample(rng, m, size), 1.0 - rng.uniform()});
  }
  return h;
}

StochasticInstance gen_sksp_instance(std::size_t n, std::size_t m, std::size_t k,
                                     std::size_t scenarios, std::uint64_t seed) {
  if (k < 1 || k > m) throw ParamError("support size bound must lie in [1, m]");
  if (scenarios < 1) throw ParamError("need at least one scenario");
  Rng rng(seed, 0x736B);
  StochasticInstance inst;
  inst.m = m;
  for (std::size_t i = 0; i < m; ++i) inst.capacities.push_back(static_cast<double>(1 + rng.below(3)));
  for (std::size_t j = 0; j < n; ++j) {
    StochasticItem item;
    item.support = distinct_sample(rng, m, 1 + rng.below(k));
    std::vector<double> raw(scenarios);
    double total = 0.0;
    for (double& r : raw) {
      r = 1.0 - rng.uniform();
      total += r;
    }
    double assigned = 0.0;
    for (std::size_t s = 0; s < scenarios; ++s) {
      Scenario sc;
      sc.probability = s + 1 == scenarios ? 1.0 - assigned : raw[s] / total;
      assigned += sc.probability;
      sc.weight = 1.0 - rng.uniform();
      for (std::size_t t = 0; t < item.support.size(); ++t) sc.size.push_back(rng.bernoulli(0.5) ? 1 : 0);
      item.scenarios.push_back(std::move(sc));
    }
    inst.items.push_back(std::move(item));
  }
  return inst;
}

TreeNetwork gen_random_tree(std::size_t vertices, std::size_t demands, std::size_t max_capacity,
                            bool decreasing, std::uint64_t seed) {
  if (vertices < 2) throw ParamError("a tree network needs at least two vertices");
  if (max_capacity < 1) throw ParamError("capacities must be at least 1");
  Rng rng(seed, 0x747265);
  TreeNetwork net;
  net.root = 0;
  net.parent.assign(vertices, -1);
  for (std::size_t v = 1; v < vertices; ++v) net.parent[v] = static_cast<std::int64_t>(rng.below(v));
  const auto depth = depths(net);
  net.edge_capacity.assign(vertices, 1.0);
  for (std::size_t v = 1; v < vertices; ++v) {
    if (decreasing) {
      const std::size_t drop = depth[v] - 1;
      net.edge_capacity[v] = static_cast<double>(drop >= max_capacity ? 1 : max_capacity - drop);
    } else {
      net.edge_capacity[v] = static_cast<double>(1 + rng.below(max_capacity));
    }
  }
  for (std::size_t i = 0; i < demands; ++i) {
    const std::size_t s = rng.below(vertices);
    std::size_t t = rng.below(vertices - 1);
    if (t >= s) ++t;
    net.demands.push_back({s, t, 1.0 - rng.uniform()});
  }
  return net;
}

StarInstance gen_star_instance(std::size_t k_e, double x_e, std::size_t per_vertex) {
  if (k_e < 1 || per_vertex < 1) throw ParamError("star needs k_e >= 1 and per_vertex >= 1");
  if (!(x_e > 0.0 && x_e <= 1.0)) throw ParamError("x_e must lie in (0,1]");
  StarInstance star;
  Hypergraph& h = star.graph;
  h.m = k_e + k_e * per_vertex;
  Hyperedge center;
  for (std::size_t v = 0; v < k_e; ++v) center.vertices.push_back(v);
  center.weight = 1.0;
  h.edges.push_back(std::move(center));
  star.x.push_back(x_e);
  const double share = (1.0 - x_e) / static_cast<double>(per_vertex);
  std::size_t fresh = k_e;
  for (std::size_t v = 0; v < k_e; ++v) {
    for (std::size_t t = 0; t < per_vertex; ++t) {
      h.edges.push_back({{v, fresh++}, share});
      star.x.push_back(share);
    }
  }
  return star;
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Kcspip: return "kcspip";
    case Algorithm::Bkns: return "bkns";
    case Algorithm::Sksp: return "sksp";
    case Algorithm::Hypermatch: return "hm";
    case Algorithm::HypermatchLinear: return "hm-linear";
    case Algorithm::Ufp: return "ufp";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::Kcspip, Algorithm::Bkns, Algorithm::Sksp, Algorithm::Hypermatch,
                      Algorithm::HypermatchLinear, Algorithm::Ufp}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

namespace {

constexpr std::uint64_t kChunkTrials = 2048;

struct TrialOutcome {
  std::vector<std::size_t> chosen;
  double objective = 0.0;
  bool feasible = true;
};

struct ChunkTally {
  std::vector<std::uint64_t> hits;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t feasible = 0;
  std::vector<std::uint64_t> violating;
};

template <typename Instance>
const Instance& expect(const AnyInstance& any, const char* what) {
  const Instance* p = std::get_if<Instance>(&any);
  if (!p) throw ValidationError(std::string("algorithm expects a ") + what + " instance");
  return *p;
}

}  // namespace

RoundingReport empirical_ratio(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw ParamError("trial count must be at least 1");
  RoundingReport report;
  report.algorithm = algorithm_name(spec.algorithm);
  report.seed = spec.seed;
  report.trials = spec.trials;

  std::vector<double> x;
  std::vector<double> floor;
  std::function<TrialOutcome(Rng&)> trial;

  // Keep the prepared rounders alive for the duration of the run.
  std::optional<KcsRounder> kcs;
  std::optional<MultiChancePlan> plan;
  std::optional<MatchingRounder> matcher;
  std::optional<UfpScheme> ufp;
  std::optional<StochasticInstance> stochastic;

  auto lp_x = [&](const PackingInstance& inst, bool strengthen) {
    if (spec.x) {
      if (spec.x->size() != inst.n) throw ValidationError("solution length does not match instance");
      return *spec.x;
    }
    return solve_packing_lp(inst, strengthen).x;
  };

  switch (spec.algorithm) {
    case Algorithm::Kcspip:
    case Algorithm::Bkns: {
      const auto& inst = expect<PackingInstance>(spec.instance, "packing");
      x = lp_x(inst, true);
      const std::size_t k = std::max<std::size_t>(1, column_sparsity(inst));
      report.sparsity = k;
      report.lp_objective = objective_value(inst, x);
      const bool ours = spec.algorithm == Algorithm::Kcspip;
      const double denom = ours ? 2.0 * static_cast<double>(k) : std::numbers::e * static_cast<double>(k);
      report.analytic_floor = ours ? "x_j/(2k)" : "x_j/(e k)";
      for (double v : x) floor.push_back(v / denom);
      if (ours) {
        kcs.emplace(inst, FractionalSolution{x, 0.0}, spec.kcs.value_or(KcsParams::defaults(k)));
        trial = [&](Rng& rng) {
          TrialOutcome out;
          const ItemSet rf = kcs->round(rng);
          out.chosen = rf.members();
          out.objective = total_weight(inst, rf);
          out.feasible = check_feasible(inst, rf);
          return out;
        };
      } else {
        const FractionalSolution xs{x, 0.0};
        trial = [&, xs](Rng& rng) {
          TrialOutcome out;
          const ItemSet rf = round_bkns(inst, xs, spec.bkns_alpha, rng);
          out.chosen = rf.members();
          out.objective = total_weight(inst, rf);
          out.feasible = check_feasible(inst, rf);
          return out;
        };
      }
      break;
    }
    case Algorithm::Sksp: {
      const auto& inst = expect<StochasticInstance>(spec.instance, "stochastic");
      const PackingInstance expected = inst.expected_instance();
      x = lp_x(expected, false);
      const std::size_t k = inst.sparsity();
      report.sparsity = k;
      report.lp_objective = objective_value(expected, x);
      const ChanceSchedule schedule = spec.schedule.value_or(compute_schedule(default_chances(k), k));
      PlanOptions options = spec.plan;
      if (options.seed == 0) options.seed = spec.seed;
      plan.emplace(inst, x, schedule, options);
      report.flagged_estimates = plan->flagged_count();
      report.analytic_floor = "sum_t beta_t x_j/k";
      for (double v : x) floor.push_back(schedule.total_beta() * v / static_cast<double>(k));
      trial = [&](Rng& rng) {
        TrialOutcome out;
        const ProbeResult r = plan->run(rng);
        out.chosen = r.items().members();
        out.objective = r.total_weight;
        return out;
      };
      break;
    }
    case Algorithm::Hypermatch:
    case Algorithm::HypermatchLinear: {
      const auto& h = expect<Hypergraph>(spec.instance, "hypergraph");
      const PackingInstance inst = to_packing_instance(h);
      x = lp_x(inst, false);
      report.sparsity = column_sparsity(inst);
      report.lp_objective = objective_value(inst, x);
      const bool nonlinear = spec.algorithm == Algorithm::Hypermatch;
      const double alpha = spec.hm_alpha;
      if (nonlinear) {
        matcher.emplace(h, x, attenuation_g);
        report.analytic_floor = "x_e (1 - exp(-k_e))/k_e";
      } else {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParamError("alpha must lie in [0,1]");
        matcher.emplace(h, x, [alpha](double v) { return alpha * v; });
        report.analytic_floor = "x_e (1 - (1-alpha)^(k_e+1))/(k_e+1)";
      }
      for (std::size_t e = 0; e < h.n(); ++e) {
        const std::size_t ke = h.edges[e].vertices.size();
        floor.push_back(x[e] * (nonlinear ? theoretical_bound(ke) : linear_bound(ke, alpha)));
      }
      trial = [&](Rng& rng) {
        TrialOutcome out;
        const ItemSet mset = matcher->round(rng);
        out.chosen = mset.members();
        for (std::size_t e : mset) out.objective += h.edges[e].weight;
        out.feasible = is_matching(h, mset);
        return out;
      };
      break;
    }
    case Algorithm::Ufp: {
      const auto& net = expect<TreeNetwork>(spec.instance, "tree");
      const PackingInstance inst = to_packing_instance(net);
      x = lp_x(inst, false);
      report.sparsity = column_sparsity(inst);
      report.lp_objective = objective_value(inst, x);
      const UfpParams params =
          spec.ufp.value_or(UfpParams::from_alpha(optimize_alpha(1e-6).alpha));
      ufp.emplace(net, x, params, spec.seed);
      report.flagged_estimates = ufp->flagged_count();
      report.analytic_floor = "alpha beta x_i";
      for (double v : x) floor.push_back(params.alpha * params.beta * v);
      trial = [&](Rng& rng) {
        TrialOutcome out;
        const ItemSet routed = ufp->round(rng);
        out.chosen = routed.members();
        for (std::size_t i : routed) out.objective += net.demands[i].weight;
        out.feasible = routing_feasible(net, routed);
        return out;
      };
      break;
    }
  }

  const std::size_t n = x.size();
  const std::uint64_t chunks = (spec.trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<ChunkTally> tallies(chunks);
  parallel_chunks(chunks, spec.jobs, [&](std::size_t c) {
    ChunkTally& tally = tallies[c];
    tally.hits.assign(n, 0);
    const std::uint64_t begin = c * kChunkTrials;
    const std::uint64_t end = std::min(spec.trials, begin + kChunkTrials);
    for (std::uint64_t t = begin; t < end; ++t) {
      Rng rng = trial_rng(spec.seed, t);
      const TrialOutcome out = trial(rng);
      for (std::size_t j : out.chosen) ++tally.hits[j];
      tally.sum += out.objective;
      tally.sum_sq += out.objective * out.objective;
      if (out.feasible) {
        ++tally.feasible;
      } else {
        tally.violating.push_back(t);
      }
    }
  });

  std::vector<std::uint64_t> hits(n, 0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const ChunkTally& tally : tallies) {
    for (std::size_t j = 0; j < n; ++j) hits[j] += tally.hits[j];
    sum += tally.sum;
    sum_sq += tally.sum_sq;
    report.feasible_trials += tally.feasible;
    report.violating_trials.insert(report.violating_trials.end(), tally.violating.begin(),
                                   tally.violating.end());
  }
  report.violations = report.violating_trials.size();
  const double trials = static_cast<double>(spec.trials);
  report.mean_objective = sum / trials;
  if (spec.trials > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1.0));
    report.objective_std_error = std::sqrt(var / trials);
  }
  for (std::size_t j = 0; j < n; ++j) {
    ItemStat s;
    s.index = j;
    s.x = x[j];
    s.frequency = static_cast<double>(hits[j]) / trials;
    s.std_error = binomial_stderr(s.frequency, spec.trials);
    s.analytic_floor = floor[j];
    s.ratio = floor[j] > 0.0 ? s.frequency / floor[j] : 0.0;
    report.items.push_back(s);
  }
  return report;
}

std::vector<TrendRow> asymptotic_trend(const std::vector<std::size_t>& ks, std::uint64_t trials,
                                       std::uint64_t seed, std::size_t jobs) {
  std::vector<TrendRow> rows;
  for (std::size_t k : ks) {
    // k-CS-PIP on the gap family with the uniform LP point x_j = 1 - k eps.
    {
      const double eps = 1e-7;
      ExperimentSpec spec;
      spec.algorithm = Algorithm::Kcspip;
      spec.instance = gen_gap_instance(k, eps);
      spec.x = std::vector<double>(2 * k - 1, 1.0 - static_cast<double>(k) * eps);
      spec.trials = trials;
      spec.seed = seed + k;
      spec.jobs = jobs;
      const auto rep = empirical_ratio(spec);
      // Every item is alike here, so averaging over items only reduces noise.
      double sum = 0.0;
      for (const auto& it : rep.items) sum += it.frequency * 2.0 * static_cast<double>(k) / it.x;
      rows.push_back({"kcspip", k, sum / static_cast<double>(rep.items.size()), 1.0,
                      "mean_j Pr[j in R_F] 2k / x_j"});
    }
    // Stochastic k-set packing: LP value over expected rounded weight, per unit of k.
    {
      ExperimentSpec spec;
      spec.algorithm = Algorithm::Sksp;
      spec.instance = gen_sksp_instance(2 * k, k, k, 2, seed + 1000 + k);
      spec.trials = trials;
      spec.seed = seed + k;
      spec.jobs = jobs;
      spec.plan.sim_budget = 20000;
      TrendRow row{"sksp", k, std::numeric_limits<double>::quiet_NaN(), 1.0,
                   "(LP / E[weight]) / k"};
      try {
        const auto rep = empirical_ratio(spec);
        if (rep.mean_objective > 0.0) {
          row.measured = rep.lp_objective / rep.mean_objective / static_cast<double>(k);
        }
      } catch (const AttenuationError& e) {
        row.quantity += std::string(" (schedule infeasible: ") + e.what() + ")";
      }
      rows.push_back(row);
    }
    // Hypergraph matching on an adversarial star with k_e = k. The centre is matched
    // with probability about x_e / k, so this family needs far more trials.
    {
      const double x_e = 0.05;
      const StarInstance star = gen_star_instance(k, x_e, 20);
      ExperimentSpec spec;
      spec.algorithm = Algorithm::Hypermatch;
      spec.instance = star.graph;
      spec.x = star.x;
      spec.trials = std::max<std::uint64_t>(trials, 500000);
      spec.seed = seed + k;
      spec.jobs = jobs;
      const auto rep = empirical_ratio(spec);
      const double ratio = rep.items[0].frequency / x_e * static_cast<double>(k);
      rows.push_back({"hypermatch", k, ratio, 1.0, "k_e Pr[e matched] / x_e"});
    }
  }
  return rows;
}

}  // namespace colsparse

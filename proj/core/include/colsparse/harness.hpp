#pragma once

// Instance generators, exhaustive optima, and the trial driver that turns an
// algorithm run into per-item inclusion statistics.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "colsparse/hypermatch.hpp"
#include "colsparse/instance.hpp"
#include "colsparse/kcspip.hpp"
#include "colsparse/sksp.hpp"
#include "colsparse/ufptree.hpp"

namespace colsparse {

/// n = m = 2k-1; a_jj = 1 and a_ij = eps for j in {i+1, ..., i+k-1} (mod n).
/// Unit weights and capacities. Requires k >= 2 and 0 < eps < 1/(10 n k).
PackingInstance gen_gap_instance(std::size_t k, double eps);

struct OptResult {
  double value = 0.0;
  ItemSet items;
};

inline constexpr std::size_t kBruteForceMaxItems = 24;

/// Maximum-weight feasible subset by depth-first enumeration that prunes any
/// branch whose partial set already violates a capacity. Instances with more than
/// max_items items are rejected; raise it only for heavily conflicting instances.
OptResult brute_force_opt(const PackingInstance& inst,
                          std::size_t max_items = kBruteForceMaxItems);

/// Every column gets k distinct uniform rows with coefficients and weights
/// uniform in (0,1]; unit capacities.
PackingInstance gen_random_kcs(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed);

/// n edges on m vertices, sizes uniform in [1, k_max], weights uniform in (0,1].
Hypergraph gen_random_hypergraph(std::size_t m, std::size_t n, std::size_t k_max,
                                 std::uint64_t seed);

/// n items on m rows, supports of size uniform in [1, k], `scenarios` outcomes each
/// with random 0/1 sizes, capacities uniform in {1, 2, 3}.
StochasticInstance gen_sksp_instance(std::size_t n, std::size_t m, std::size_t k,
                                     std::size_t scenarios, std::uint64_t seed);

/// Random recursive tree on `vertices` vertices rooted at 0 (parent of v uniform
/// below v) with `demands` random demand pairs. With `decreasing`, capacities
/// shrink with depth from max_capacity down to 1; otherwise uniform in [1, max_capacity].
TreeNetwork gen_random_tree(std::size_t vertices, std::size_t demands, std::size_t max_capacity,
                            bool decreasing, std::uint64_t seed);

/// Edge 0 has k_e vertices and LP value x_e; each of its vertices also lies in
/// `per_vertex` two-vertex edges whose LP values fill the vertex to 1.
struct StarInstance {
  Hypergraph graph;
  std::vector<double> x;
};
StarInstance gen_star_instance(std::size_t k_e, double x_e, std::size_t per_vertex);

enum class Algorithm { Kcspip, Bkns, Sksp, Hypermatch, HypermatchLinear, Ufp };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

using AnyInstance = std::variant<PackingInstance, StochasticInstance, Hypergraph, TreeNetwork>;

struct ExperimentSpec {
  Algorithm algorithm = Algorithm::Kcspip;
  AnyInstance instance;
  std::optional<std::vector<double>> x;  // absent: solve the LP relaxation
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  std::optional<KcsParams> kcs;        // absent: KcsParams::defaults(k)
  double bkns_alpha = 1.0;
  std::optional<ChanceSchedule> schedule;  // absent: compute_schedule(default_chances(k), k)
  PlanOptions plan;
  double hm_alpha = 1.0;
  std::optional<UfpParams> ufp;        // absent: alpha from optimize_alpha(1e-6)
};

struct ItemStat {
  std::size_t index = 0;
  double x = 0.0;
  double frequency = 0.0;
  double std_error = 0.0;
  double analytic_floor = 0.0;
  double ratio = 0.0;  // frequency / analytic_floor, 0 when the floor is 0
};

struct RoundingReport {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::size_t sparsity = 0;
  double lp_objective = 0.0;
  double mean_objective = 0.0;
  double objective_std_error = 0.0;
  std::uint64_t feasible_trials = 0;
  std::uint64_t violations = 0;
  std::vector<std::uint64_t> violating_trials;  // replay with trial_rng(seed, t)
  std::size_t flagged_estimates = 0;            // attenuation estimates clamped to keep = 1
  std::string analytic_floor;                   // formula of the comparison column
  std::vector<ItemStat> items;
};

/// Runs spec.trials independent trials; trial t uses trial_rng(seed, t), so the
/// report does not depend on spec.jobs.
RoundingReport empirical_ratio(const ExperimentSpec& spec);

/// One row of the small-k trend table.
struct TrendRow {
  std::string family;
  std::size_t k = 0;
  double measured = 0.0;   // quantity tracked across k (see `quantity`)
  double reference = 0.0;  // the large-k limit it is compared with
  std::string quantity;
};

/// Trend of the per-item guarantee ratios across k (reported, never asserted).
std::vector<TrendRow> asymptotic_trend(const std::vector<std::size_t>& ks, std::uint64_t trials,
                                       std::uint64_t seed, std::size_t jobs = 1);

}  // namespace colsparse

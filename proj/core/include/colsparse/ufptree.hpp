#pragma once

// Contention resolution for unit-demand unsplittable flow on a tree: sample demands,
// scan them by LCA depth, keep a safe demand with probability beta / eta_i, where
// eta_i is its estimated probability of being safe.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "colsparse/instance.hpp"
#include "colsparse/rng.hpp"

namespace colsparse {

struct Demand {
  std::size_t s = 0;
  std::size_t t = 0;
  double weight = 1.0;
};

/// Rooted tree; the edge above vertex v (v != root) is identified with v and has
/// capacity edge_capacity[v]. The root's entry is ignored.
struct TreeNetwork {
  std::vector<std::int64_t> parent;  // -1 at the root
  std::size_t root = 0;
  std::vector<double> edge_capacity;
  std::vector<Demand> demands;

  std::size_t vertex_count() const { return parent.size(); }
};

ValidationReport validate_tree(const TreeNetwork& net);

std::vector<std::size_t> depths(const TreeNetwork& net);
/// Naive upward walk.
std::size_t lca(const TreeNetwork& net, const std::vector<std::size_t>& depth, std::size_t u,
                std::size_t v);
/// Edges (child vertices) on the s-t path.
std::vector<std::size_t> path_edges(const TreeNetwork& net, const std::vector<std::size_t>& depth,
                                    std::size_t s, std::size_t t);

/// Demands sorted by depth of their LCA, ties by index.
std::vector<std::size_t> lca_order(const TreeNetwork& net);

/// Rows are edges (indexed by child vertex), columns are demand paths.
PackingInstance to_packing_instance(const TreeNetwork& net);

struct UfpParams {
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t sim_budget = 0;  // 0: derive from the sample-size rule

  /// beta = 1 - 2 alpha e / (1 - alpha e); requires 0 < alpha e < 1/3.
  static UfpParams from_alpha(double alpha, std::uint64_t sim_budget = 0);
  void validate() const;
};

/// alpha (1 - 2 gamma e / (1 - gamma e)) with gamma = alpha beta, or a negative value
/// when alpha is outside the feasible region 0 <= gamma e < 1/3, beta >= 0.
double ufp_balance(double alpha);

struct AlphaOptimum {
  double alpha = 0.0;
  double balance = 0.0;
};

/// Grid search over alpha in [0, 1]; grid must be in (0, 1e-5].
AlphaOptimum optimize_alpha(double grid);

/// Default simulation budget: required_samples(c = beta, eps = 0.05, delta = 1e-3),
/// capped at kUfpMaxDefaultBudget.
inline constexpr std::uint64_t kUfpMaxDefaultBudget = 100000;
std::uint64_t default_ufp_budget(double beta);

/// Safety estimates computed once; round() is then one trial.
class UfpScheme {
 public:
  UfpScheme(const TreeNetwork& net, const std::vector<double>& x, const UfpParams& params,
            std::uint64_t seed = 0);

  ItemSet round(Rng& rng) const;

  const std::vector<double>& eta() const { return eta_; }
  /// keep_probability()[i] = min(1, beta / eta_i) (1 when eta_i = 0).
  const std::vector<double>& keep_probability() const { return keep_; }
  bool flagged(std::size_t i) const { return flagged_[i] != 0; }
  std::size_t flagged_count() const;
  const std::vector<std::size_t>& order() const { return order_; }
  std::uint64_t sim_budget() const { return budget_; }

 private:
  const TreeNetwork* net_;
  UfpParams params_;
  std::uint64_t budget_;
  std::vector<double> sample_;  // alpha x_i
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> paths_;
  std::vector<double> eta_;
  std::vector<double> keep_;
  std::vector<char> flagged_;
};

ItemSet cr_round(const TreeNetwork& net, const FractionalSolution& x, const UfpParams& params,
                 Rng& rng);

/// True iff routing `chosen` respects every edge capacity.
bool routing_feasible(const TreeNetwork& net, const ItemSet& chosen);

}  // namespace colsparse

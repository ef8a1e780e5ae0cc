#pragma once

// Alteration rounding for k-column-sparse packing integer programs:
// sample, discard medium/tiny blocking events, build the big-conflict digraph,
// drop anomalous vertices, color, keep one color class.

#include <cstddef>
#include <optional>
#include <vector>

#include "colsparse/graphcolor.hpp"
#include "colsparse/instance.hpp"
#include "colsparse/rng.hpp"

namespace colsparse {

enum class CoefficientClass { Big, Medium, Tiny };

/// Big iff a > 1/2, Medium iff 1/ell <= a <= 1/2, Tiny iff 0 < a < 1/ell.
CoefficientClass classify_coefficient(double a, std::size_t ell);

/// classify(inst, ell)[j][t] is the class of the t-th entry of column j.
/// Coefficients are taken relative to the row capacity.
std::vector<std::vector<CoefficientClass>> classify(const PackingInstance& inst, std::size_t ell);

struct KcsParams {
  double alpha = 1.0;
  std::size_t ell = 3;
  std::size_t d = 1;
  std::optional<double> epsilon;  // set: randomized near-negative-correlation coloring

  /// alpha = max(1, k^0.4), ell = max(3, ceil(80 ln(k/alpha))), d = default_d(alpha).
  static KcsParams defaults(std::size_t k);
  void validate() const;
  std::size_t palette() const;
};

double default_alpha(std::size_t k);
std::size_t default_ell(std::size_t k, double alpha);
/// ceil(alpha + sqrt(alpha ln alpha)), the root dropped for alpha < e.
std::size_t default_d(double alpha);

/// min(1, alpha x_j / k) with k = column sparsity (1 for an instance with no entries).
std::vector<double> sampling_probabilities(const PackingInstance& inst, const std::vector<double>& x,
                                           double alpha);

ItemSet sample_r0(const PackingInstance& inst, const FractionalSolution& x, const KcsParams& params,
                  Rng& rng);

/// R0 minus every item with a medium or tiny blocking event, all evaluated against R0.
ItemSet discard_blocked(const PackingInstance& inst, const ItemSet& r0, std::size_t ell);

/// Vertex v of `graph` is item `items[v]`.
struct ConflictGraph {
  DiGraph graph;
  std::vector<std::size_t> items;
};

/// Arc j -> j' iff some row has a_ij > 0 and a_ij' > 1/2 (j != j').
ConflictGraph build_conflict_digraph(const PackingInstance& inst, const ItemSet& r1);

/// Vertices of g whose out-degree in g is at most d (no cascading).
ItemSet remove_anomalous(const DiGraph& g, std::size_t d);
/// Same, mapped back to item indices.
ItemSet remove_anomalous(const ConflictGraph& g, std::size_t d);

/// Every intermediate set of one rounding run.
struct KcsTrace {
  ItemSet r0;
  ItemSet r1;
  ItemSet r2;
  ItemSet rf;
  Coloring coloring;  // indexed like r2
  std::size_t chosen_color = 0;
};

/// Precomputes the row structure so repeated trials avoid rebuilding it.
class KcsRounder {
 public:
  KcsRounder(const PackingInstance& inst, const FractionalSolution& x, const KcsParams& params);

  ItemSet round(Rng& rng) const;
  KcsTrace round_traced(Rng& rng) const;

  /// Deterministic part of the pipeline: R0 -> R2.
  ItemSet survivors(const ItemSet& r0) const;
  ItemSet discard(const ItemSet& r0) const;
  ConflictGraph conflict(const std::vector<std::size_t>& r1) const;

  const std::vector<double>& probabilities() const { return prob_; }
  const KcsParams& params() const { return params_; }
  std::size_t sparsity() const { return k_; }

 private:
  struct Cell {
    std::size_t index;  // row for column cells, item for row cells
    double coeff;       // relative to capacity
    CoefficientClass cls;
  };

  Coloring color(const DiGraph& g, Rng& rng) const;

  const PackingInstance* inst_;
  KcsParams params_;
  std::size_t k_;
  std::vector<double> prob_;
  std::vector<std::vector<Cell>> cols_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::vector<std::size_t>> big_;  // big items per row
};

ItemSet round_kcspip(const PackingInstance& inst, const FractionalSolution& x,
                     const KcsParams& params, Rng& rng);

/// Baseline: sample with alpha x/k, discard medium/tiny events, then drop every item
/// that shares a row (with nonzero coefficient) with another surviving big item.
ItemSet round_bkns(const PackingInstance& inst, const FractionalSolution& x, double alpha,
                   Rng& rng);
ItemSet round_bkns(const PackingInstance& inst, const FractionalSolution& x, double alpha,
                   std::size_t ell, Rng& rng);

/// Largest n accepted by the exact oracles.
inline constexpr std::size_t kExactMaxItems = 16;

/// Pr[j in R_F] by enumerating every R0 (and every color draw when epsilon is set).
std::vector<double> exact_inclusion_probabilities(const PackingInstance& inst,
                                                  const FractionalSolution& x,
                                                  const KcsParams& params);

/// joint[u][v] = Pr[u in R_F and v in R_F]; the diagonal holds the marginals.
std::vector<std::vector<double>> exact_joint_probabilities(const PackingInstance& inst,
                                                           const FractionalSolution& x,
                                                           const KcsParams& params);

/// Pr[j in R_F | R0 = r0]; only the coloring and color draw are random here.
double conditional_inclusion(const PackingInstance& inst, const KcsParams& params,
                             const ItemSet& r0, std::size_t j);

}  // namespace colsparse

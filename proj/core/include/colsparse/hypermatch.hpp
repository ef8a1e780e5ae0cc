#pragma once

// Hypergraph matching by independent marking with an attenuation function,
// followed by a greedy pass over marked edges in random order.

#include <cstddef>
#include <functional>
#include <vector>

#include "colsparse/instance.hpp"
#include "colsparse/rng.hpp"

namespace colsparse {

struct Hyperedge {
  std::vector<std::size_t> vertices;
  double weight = 0.0;
};

struct Hypergraph {
  std::size_t m = 0;  // vertex count
  std::vector<Hyperedge> edges;

  std::size_t n() const { return edges.size(); }
};

ValidationReport validate_hypergraph(const Hypergraph& h);

/// Vertices as rows, edges as unit columns, unit capacities.
PackingInstance to_packing_instance(const Hypergraph& h);

/// Marking probability as a function of the LP value.
using Attenuation = std::function<double(double)>;

/// x (1 - x/2); DomainError outside [0,1].
double attenuation_g(double x);

/// (1 - e^{-k}) / k. Only a valid floor for k_e >= 2: a lone single-vertex edge
/// with x_e = 1 is matched with probability 1/2.
double theoretical_bound(std::size_t k_e);
/// (1 - (1 - alpha)^{k+1}) / (k + 1): guarantee of the linear rule alpha x.
double linear_bound(std::size_t k_e, double alpha);

/// True iff no two edges of `matching` share a vertex.
bool is_matching(const Hypergraph& h, const ItemSet& matching);

/// Precomputes marking probabilities for repeated trials.
class MatchingRounder {
 public:
  MatchingRounder(const Hypergraph& h, const std::vector<double>& x, const Attenuation& g);

  ItemSet round(Rng& rng) const;
  const std::vector<double>& mark_probabilities() const { return mark_; }

 private:
  const Hypergraph* h_;
  std::vector<double> mark_;
};

ItemSet round_matching(const Hypergraph& h, const FractionalSolution& x, const Attenuation& g,
                       Rng& rng);

/// The rule g(x) = alpha x.
ItemSet round_matching_linear(const Hypergraph& h, const FractionalSolution& x, double alpha,
                              Rng& rng);

}  // namespace colsparse

#pragma once

// Coloring of digraphs with bounded out-degree, proper on the undirected version.

#include <cstddef>
#include <vector>

#include "colsparse/rng.hpp"

namespace colsparse {

class DiGraph {
 public:
  explicit DiGraph(std::size_t vertex_count = 0) : out_(vertex_count) {}

  /// Adds u -> v. Throws ValidationError on a self-loop or bad index; repeated arcs are ignored.
  void add_arc(std::size_t u, std::size_t v);

  std::size_t vertex_count() const { return out_.size(); }
  std::size_t arc_count() const;
  const std::vector<std::size_t>& out(std::size_t v) const { return out_[v]; }
  std::size_t out_degree(std::size_t v) const { return out_[v].size(); }
  std::size_t max_out_degree() const;
  bool has_arc(std::size_t u, std::size_t v) const;

  /// Subgraph on `keep` (sorted), vertices renumbered 0..keep.size()-1.
  DiGraph induced(const std::vector<std::size_t>& keep) const;

 private:
  std::vector<std::vector<std::size_t>> out_;
};

struct Coloring {
  std::vector<std::size_t> color;
  std::size_t palette = 0;  // colors are drawn from [0, palette)

  std::size_t colors_used() const;
};

/// Palette sizes used by the two colorings.
std::size_t greedy_palette(std::size_t d);                        // 2d + 1
std::size_t neg_corr_choices(std::size_t d, double epsilon);      // ceil(d^(1-eps))
std::size_t neg_corr_palette(std::size_t d, double epsilon);      // 2d + ceil(d^(1-eps))

/// Repeatedly remove a vertex of minimum total (in + out) degree, lowest index on ties.
/// Returns vertices in removal order; coloring processes them in reverse.
std::vector<std::size_t> peel_order(const DiGraph& g);

/// Deterministic greedy coloring with at most 2d+1 colors.
/// Throws DegreeError if some out-degree exceeds d.
Coloring color_directed_graph(const DiGraph& g, std::size_t d);

/// Each vertex (reverse peel order) takes a uniform color among the ceil(d^(1-eps))
/// smallest colors of [0, 2d + ceil(d^(1-eps))) unused by its colored neighbours.
Coloring color_neg_corr(const DiGraph& g, std::size_t d, double epsilon, Rng& rng);

/// True iff every arc joins two distinct colors.
bool verify_coloring(const DiGraph& g, const Coloring& chi);

}  // namespace colsparse

#include "colsparse/graphcolor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "colsparse/errors.hpp"

namespace colsparse {

void DiGraph::add_arc(std::size_t u, std::size_t v) {
  if (u >= out_.size() || v >= out_.size()) throw ValidationError("arc endpoint out of range");
  if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(u));
  auto& list = out_[u];
  if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
}

std::size_t DiGraph::arc_count() const {
  std::size_t total = 0;
  for (const auto& list : out_) total += list.size();
  return total;
}

std::size_t DiGraph::max_out_degree() const {
  std::size_t best = 0;
  for (const auto& list : out_) best = std::max(best, list.size());
  return best;
}

bool DiGraph::has_arc(std::size_t u, std::size_t v) const {
  const auto& list = out_[u];
  return std::find(list.begin(), list.end(), v) != list.end();
}

DiGraph DiGraph::induced(const std::vector<std::size_t>& keep) const {
  std::vector<std::size_t> index(out_.size(), out_.size());
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = i;
  DiGraph sub(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t v : out_[keep[i]]) {
      if (index[v] != out_.size()) sub.out_[i].push_back(index[v]);
    }
  }
  return sub;
}

std::size_t Coloring::colors_used() const {
  std::vector<std::size_t> c = color;
  std::sort(c.begin(), c.end());
  return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
}

std::size_t greedy_palette(std::size_t d) { return 2 * d + 1; }

std::size_t neg_corr_choices(std::size_t d, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParamError("epsilon must lie in (0,1)");
  if (d == 0) throw ParamError("degree bound must be at least 1");
  // The guard keeps exact integers such as 4^0.5 from rounding up to 3.
  const double raw = std::pow(static_cast<double>(d), 1.0 - epsilon);
  return static_cast<std::size_t>(std::ceil(raw - 1e-12));
}

std::size_t neg_corr_palette(std::size_t d, double epsilon) {
  return 2 * d + neg_corr_choices(d, epsilon);
}

namespace {

void check_degree(const DiGraph& g, std::size_t d) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.out_degree(v) > d) {
      throw DegreeError("vertex " + std::to_string(v) + " has out-degree " +
                        std::to_string(g.out_degree(v)) + " > " + std::to_string(d));
    }
  }
}

// Distinct undirected neighbours of every vertex.
std::vector<std::vector<std::size_t>> undirected(const DiGraph& g) {
  std::vector<std::vector<std::size_t>> nb(g.vertex_count());
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    for (std::size_t v : g.out(u)) {
      nb[u].push_back(v);
      nb[v].push_back(u);
    }
  }
  for (auto& list : nb) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nb;
}

constexpr std::size_t kUncolored = static_cast<std::size_t>(-1);

}  // namespace

std::vector<std::size_t> peel_order(const DiGraph& g) {
  const std::size_t n = g.vertex_count();
  // Total degree counts arcs, so a bidirected pair contributes 2.
  std::vector<std::vector<std::size_t>> in(n);
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : g.out(u)) {
      in[v].push_back(u);
      ++deg[u];
      ++deg[v];
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t v = 0; v < n; ++v) queue.emplace(deg[v], v);
  std::vector<char> removed(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  auto lower = [&](std::size_t w) {
    queue.erase({deg[w], w});
    --deg[w];
    queue.emplace(deg[w], w);
  };
  while (!queue.empty()) {
    const std::size_t v = queue.begin()->second;
    queue.erase(queue.begin());
    removed[v] = 1;
    order.push_back(v);
    for (std::size_t w : g.out(v)) {
      if (!removed[w]) lower(w);
    }
    for (std::size_t w : in[v]) {
      if (!removed[w]) lower(w);
    }
  }
  return order;
}

Coloring color_directed_graph(const DiGraph& g, std::size_t d) {
  check_degree(g, d);
  const auto nb = undirected(g);
  const auto order = peel_order(g);
  Coloring chi;
  chi.palette = greedy_palette(d);
  chi.color.assign(g.vertex_count(), kUncolored);
  std::vector<char> used(chi.palette, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t v = *it;
    std::fill(used.begin(), used.end(), 0);
    for (std::size_t w : nb[v]) {
      if (chi.color[w] != kUncolored) used[chi.color[w]] = 1;
    }
    const auto free = std::find(used.begin(), used.end(), 0);
    if (free == used.end()) {
      throw InternalError("no free color for vertex " + std::to_string(v));
    }
    chi.color[v] = static_cast<std::size_t>(free - used.begin());
  }
  return chi;
}

Coloring color_neg_corr(const DiGraph& g, std::size_t d, double epsilon, Rng& rng) {
  const std::size_t choices = neg_corr_choices(d, epsilon);
  check_degree(g, d);
  const auto nb = undirected(g);
  const auto order = peel_order(g);
  Coloring chi;
  chi.palette = 2 * d + choices;
  chi.color.assign(g.vertex_count(), kUncolored);
  std::vector<char> used(chi.palette, 0);
  std::vector<std::size_t> avail;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t v = *it;
    std::fill(used.begin(), used.end(), 0);
    for (std::size_t w : nb[v]) {
      if (chi.color[w] != kUncolored) used[chi.color[w]] = 1;
    }
    avail.clear();
    for (std::size_t c = 0; c < chi.palette && avail.size() < choices; ++c) {
      if (!used[c]) avail.push_back(c);
    }
    if (avail.size() < choices) {
      throw InternalError("fewer than " + std::to_string(choices) + " free colors for vertex " +
                          std::to_string(v));
    }
    chi.color[v] = avail[rng.below(choices)];
  }
  return chi;
}

bool verify_coloring(const DiGraph& g, const Coloring& chi) {
  if (chi.color.size() != g.vertex_count()) return false;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (chi.color[u] >= chi.palette) return false;
    for (std::size_t v : g.out(u)) {
      if (chi.color[u] == chi.color[v]) return false;
    }
  }
  return true;
}

}  // namespace colsparse

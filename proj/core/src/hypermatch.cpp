#include "colsparse/hypermatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "colsparse/errors.hpp"

namespace colsparse {

ValidationReport validate_hypergraph(const Hypergraph& h) {
  ValidationReport report;
  for (std::size_t e = 0; e < h.edges.size(); ++e) {
    const auto& edge = h.edges[e];
    const std::string tag = "edge " + std::to_string(e) + ": ";
    if (edge.vertices.empty()) report.violations.push_back(tag + "has no vertices");
    auto v = edge.vertices;
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
      report.violations.push_back(tag + "repeated vertex");
    }
    if (!v.empty() && v.back() >= h.m) report.violations.push_back(tag + "vertex out of range");
    if (!(edge.weight >= 0.0) || !std::isfinite(edge.weight)) {
      report.violations.push_back(tag + "negative weight");
    }
  }
  return report;
}

PackingInstance to_packing_instance(const Hypergraph& h) {
  PackingInstance inst;
  inst.n = h.edges.size();
  inst.m = h.m;
  inst.capacities.assign(h.m, 1.0);
  for (const auto& edge : h.edges) {
    std::vector<Entry> col;
    for (std::size_t v : edge.vertices) col.push_back({v, 1.0});
    inst.columns.push_back(std::move(col));
    inst.weights.push_back(edge.weight);
  }
  return inst;
}

double attenuation_g(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("attenuation_g expects x in [0,1]");
  return x * (1.0 - x / 2.0);
}

double theoretical_bound(std::size_t k_e) {
  if (k_e < 1) throw DomainError("edge size must be at least 1");
  const double k = static_cast<double>(k_e);
  return -std::expm1(-k) / k;
}

double linear_bound(std::size_t k_e, double alpha) {
  if (k_e < 1) throw DomainError("edge size must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  const double k1 = static_cast<double>(k_e + 1);
  return (1.0 - std::pow(1.0 - alpha, k1)) / k1;
}

bool is_matching(const Hypergraph& h, const ItemSet& matching) {
  std::vector<char> used(h.m, 0);
  for (std::size_t e : matching) {
    for (std::size_t v : h.edges[e].vertices) {
      if (used[v]) return false;
      used[v] = 1;
    }
  }
  return true;
}

MatchingRounder::MatchingRounder(const Hypergraph& h, const std::vector<double>& x,
                                 const Attenuation& g)
    : h_(&h) {
  const auto report = validate_hypergraph(h);
  if (!report.ok()) throw ValidationError("invalid hypergraph: " + report.violations.front());
  if (x.size() != h.n()) throw ValidationError("solution length does not match edge count");
  mark_.reserve(x.size());
  for (double xe : x) {
    if (!(xe >= 0.0 && xe <= 1.0)) throw ValidationError("solution entry outside [0,1]");
    const double p = g(xe);
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("attenuation must map into [0,1]");
    mark_.push_back(p);
  }
}

ItemSet MatchingRounder::round(Rng& rng) const {
  std::vector<std::pair<double, std::size_t>> marked;
  for (std::size_t e = 0; e < mark_.size(); ++e) {
    if (rng.bernoulli(mark_[e])) marked.emplace_back(0.0, e);
  }
  // Keys only for marked edges: unmarked ones never influence the outcome.
  for (auto& m : marked) m.first = rng.uniform();
  std::sort(marked.begin(), marked.end());
  std::vector<char> used(h_->m, 0);
  std::vector<std::size_t> chosen;
  for (const auto& [key, e] : marked) {
    const auto& verts = h_->edges[e].vertices;
    const bool free = std::none_of(verts.begin(), verts.end(), [&](std::size_t v) { return used[v]; });
    if (!free) continue;
    for (std::size_t v : verts) used[v] = 1;
    chosen.push_back(e);
  }
  return ItemSet(std::move(chosen));
}

ItemSet round_matching(const Hypergraph& h, const FractionalSolution& x, const Attenuation& g,
                       Rng& rng) {
  return MatchingRounder(h, x.x, g).round(rng);
}

ItemSet round_matching_linear(const Hypergraph& h, const FractionalSolution& x, double alpha,
                              Rng& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParamError("alpha must lie in [0,1]");
  return MatchingRounder(h, x.x, [alpha](double v) { return alpha * v; }).round(rng);
}

}  // namespace colsparse

#include "colsparse/kcspip.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "colsparse/errors.hpp"
#include "colsparse/lp.hpp"

namespace colsparse {

CoefficientClass classify_coefficient(double a, std::size_t ell) {
  if (a > 0.5) return CoefficientClass::Big;
  if (a * static_cast<double>(ell) >= 1.0) return CoefficientClass::Medium;
  return CoefficientClass::Tiny;
}

std::vector<std::vector<CoefficientClass>> classify(const PackingInstance& inst, std::size_t ell) {
  if (ell < 3) throw ParamError("ell must be at least 3");
  std::vector<std::vector<CoefficientClass>> out(inst.n);
  for (std::size_t j = 0; j < inst.n; ++j) {
    for (const Entry& e : inst.columns[j]) {
      out[j].push_back(classify_coefficient(e.coeff / inst.capacities[e.row], ell));
    }
  }
  return out;
}

double default_alpha(std::size_t k) {
  return std::max(1.0, std::pow(static_cast<double>(k), 0.4));
}

std::size_t default_ell(std::size_t k, double alpha) {
  const double ratio = static_cast<double>(k) / alpha;
  if (ratio <= 1.0) return 3;
  const double raw = 80.0 * std::log(ratio);
  return std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(raw - 1e-12)));
}

std::size_t default_d(double alpha) {
  double d = alpha;
  if (alpha >= std::numbers::e) d += std::sqrt(alpha * std::log(alpha));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(d - 1e-12)));
}

KcsParams KcsParams::defaults(std::size_t k) {
  KcsParams p;
  p.alpha = default_alpha(k);
  p.ell = default_ell(k, p.alpha);
  p.d = default_d(p.alpha);
  return p;
}

void KcsParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParamError("alpha must be positive");
  if (ell < 3) throw ParamError("ell must be at least 3");
  if (d < 1) throw ParamError("d must be at least 1");
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0)) {
    throw ParamError("epsilon must lie in (0,1)");
  }
}

std::size_t KcsParams::palette() const {
  return epsilon ? neg_corr_palette(d, *epsilon) : greedy_palette(d);
}

std::vector<double> sampling_probabilities(const PackingInstance& inst, const std::vector<double>& x,
                                           double alpha) {
  if (x.size() != inst.n) throw ValidationError("solution length does not match item count");
  const double k = static_cast<double>(std::max<std::size_t>(1, column_sparsity(inst)));
  std::vector<double> p(inst.n);
  for (std::size_t j = 0; j < inst.n; ++j) {
    if (!(x[j] >= 0.0 && x[j] <= 1.0)) {
      throw ValidationError("x[" + std::to_string(j) + "] outside [0,1]");
    }
    p[j] = std::min(1.0, alpha * x[j] / k);
  }
  return p;
}

namespace {

void require_valid(const PackingInstance& inst) {
  const auto report = validate_instance(inst);
  if (!report.ok()) throw ValidationError("invalid instance: " + report.violations.front());
}

FractionalSolution zero_solution(std::size_t n) {
  FractionalSolution x;
  x.x.assign(n, 0.0);
  return x;
}

}  // namespace

KcsRounder::KcsRounder(const PackingInstance& inst, const FractionalSolution& x,
                       const KcsParams& params)
    : inst_(&inst), params_(params) {
  require_valid(inst);
  params_.validate();
  k_ = std::max<std::size_t>(1, column_sparsity(inst));
  prob_ = sampling_probabilities(inst, x.x, params_.alpha);
  cols_.resize(inst.n);
  rows_.resize(inst.m);
  big_.resize(inst.m);
  for (std::size_t j = 0; j < inst.n; ++j) {
    for (const Entry& e : inst.columns[j]) {
      const double a = e.coeff / inst.capacities[e.row];
      const auto cls = classify_coefficient(a, params_.ell);
      cols_[j].push_back({e.row, a, cls});
      rows_[e.row].push_back({j, a, cls});
      if (cls == CoefficientClass::Big) big_[e.row].push_back(j);
    }
  }
}

ItemSet KcsRounder::discard(const ItemSet& r0) const {
  const std::size_t n = inst_->n;
  std::vector<char> in0(n, 0);
  for (std::size_t j : r0) in0[j] = 1;
  std::vector<std::size_t> kept;
  kept.reserve(r0.size());
  for (std::size_t j : r0) {
    bool blocked = false;
    for (const Cell& c : cols_[j]) {
      if (c.cls == CoefficientClass::Big) continue;
      std::size_t medium = 0;
      double others = 0.0;  // medium + tiny usage of row by R0 \ {j}
      for (const Cell& r : rows_[c.index]) {
        if (!in0[r.index] || r.cls == CoefficientClass::Big) continue;
        if (r.cls == CoefficientClass::Medium) ++medium;
        if (r.index != j) others += r.coeff;
      }
      if (c.cls == CoefficientClass::Medium) {
        blocked = medium >= 3;
      } else {
        blocked = others > 1.0 - c.coeff || medium >= 2;
      }
      if (blocked) break;
    }
    if (!blocked) kept.push_back(j);
  }
  return ItemSet::from_sorted(std::move(kept));
}

ConflictGraph KcsRounder::conflict(const std::vector<std::size_t>& r1) const {
  const std::size_t n = inst_->n;
  std::vector<std::size_t> pos(n, n);
  for (std::size_t v = 0; v < r1.size(); ++v) pos[r1[v]] = v;
  ConflictGraph cg{DiGraph(r1.size()), r1};
  for (std::size_t v = 0; v < r1.size(); ++v) {
    const std::size_t j = r1[v];
    for (const Cell& c : cols_[j]) {
      for (std::size_t jb : big_[c.index]) {
        if (jb != j && pos[jb] != n) cg.graph.add_arc(v, pos[jb]);
      }
    }
  }
  return cg;
}

ItemSet KcsRounder::survivors(const ItemSet& r0) const {
  const ItemSet r1 = discard(r0);
  return remove_anomalous(conflict(r1.members()), params_.d);
}

Coloring KcsRounder::color(const DiGraph& g, Rng& rng) const {
  try {
    if (params_.epsilon) return color_neg_corr(g, params_.d, *params_.epsilon, rng);
    return color_directed_graph(g, params_.d);
  } catch (const DegreeError& e) {
    throw InternalError(std::string("degree bound broken after anomaly removal: ") + e.what());
  }
}

KcsTrace KcsRounder::round_traced(Rng& rng) const {
  KcsTrace t;
  std::vector<std::size_t> r0;
  for (std::size_t j = 0; j < inst_->n; ++j) {
    if (rng.bernoulli(prob_[j])) r0.push_back(j);
  }
  t.r0 = ItemSet::from_sorted(std::move(r0));
  t.r1 = discard(t.r0);
  const ConflictGraph g = conflict(t.r1.members());
  std::vector<std::size_t> keep_vertices;
  std::vector<std::size_t> r2;
  for (std::size_t v = 0; v < g.items.size(); ++v) {
    if (g.graph.out_degree(v) <= params_.d) {
      keep_vertices.push_back(v);
      r2.push_back(g.items[v]);
    }
  }
  t.r2 = ItemSet::from_sorted(std::move(r2));
  if (t.r2.empty()) return t;
  const DiGraph reduced = g.graph.induced(keep_vertices);
  t.coloring = color(reduced, rng);
  t.chosen_color = rng.below(t.coloring.palette);
  std::vector<std::size_t> rf;
  for (std::size_t v = 0; v < t.r2.size(); ++v) {
    if (t.coloring.color[v] == t.chosen_color) rf.push_back(t.r2[v]);
  }
  t.rf = ItemSet::from_sorted(std::move(rf));
  if (!check_feasible(*inst_, t.rf)) throw InternalError("rounded set violates a capacity");
  return t;
}

ItemSet KcsRounder::round(Rng& rng) const { return round_traced(rng).rf; }

ItemSet sample_r0(const PackingInstance& inst, const FractionalSolution& x, const KcsParams& params,
                  Rng& rng) {
  const auto p = sampling_probabilities(inst, x.x, params.alpha);
  std::vector<std::size_t> r0;
  for (std::size_t j = 0; j < inst.n; ++j) {
    if (rng.bernoulli(p[j])) r0.push_back(j);
  }
  return ItemSet::from_sorted(std::move(r0));
}

ItemSet discard_blocked(const PackingInstance& inst, const ItemSet& r0, std::size_t ell) {
  KcsParams p;
  p.ell = ell;
  return KcsRounder(inst, zero_solution(inst.n), p).discard(r0);
}

ConflictGraph build_conflict_digraph(const PackingInstance& inst, const ItemSet& r1) {
  return KcsRounder(inst, zero_solution(inst.n), KcsParams{}).conflict(r1.members());
}

ItemSet remove_anomalous(const DiGraph& g, std::size_t d) {
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.out_degree(v) <= d) keep.push_back(v);
  }
  return ItemSet::from_sorted(std::move(keep));
}

ItemSet remove_anomalous(const ConflictGraph& g, std::size_t d) {
  std::vector<std::size_t> keep;
  for (std::size_t v : remove_anomalous(g.graph, d)) keep.push_back(g.items[v]);
  return ItemSet::from_sorted(std::move(keep));
}

ItemSet round_kcspip(const PackingInstance& inst, const FractionalSolution& x,
                     const KcsParams& params, Rng& rng) {
  return KcsRounder(inst, x, params).round(rng);
}

ItemSet round_bkns(const PackingInstance& inst, const FractionalSolution& x, double alpha,
                   Rng& rng) {
  const std::size_t k = std::max<std::size_t>(1, column_sparsity(inst));
  return round_bkns(inst, x, alpha, default_ell(k, alpha), rng);
}

ItemSet round_bkns(const PackingInstance& inst, const FractionalSolution& x, double alpha,
                   std::size_t ell, Rng& rng) {
  KcsParams params;
  params.alpha = alpha;
  params.ell = ell;
  const KcsRounder rounder(inst, x, params);
  std::vector<std::size_t> r0;
  for (std::size_t j = 0; j < inst.n; ++j) {
    if (rng.bernoulli(rounder.probabilities()[j])) r0.push_back(j);
  }
  const ItemSet r1 = rounder.discard(ItemSet::from_sorted(std::move(r0)));
  std::vector<char> in1(inst.n, 0);
  for (std::size_t j : r1) in1[j] = 1;
  const auto big = big_sets(inst);
  std::vector<std::size_t> kept;
  for (std::size_t j : r1) {
    bool blocked = false;
    for (const Entry& e : inst.columns[j]) {
      for (std::size_t jb : big[e.row]) {
        if (jb != j && in1[jb]) blocked = true;
      }
    }
    if (!blocked) kept.push_back(j);
  }
  ItemSet rf = ItemSet::from_sorted(std::move(kept));
  if (!check_feasible(inst, rf)) throw InternalError("baseline rounding violates a capacity");
  return rf;
}

namespace {

// Pr[chi(u) = chi(v)] for every pair under the randomized coloring, by enumerating
// every color draw along the processing order.
std::vector<std::vector<double>> same_color_probabilities(const DiGraph& g, std::size_t d,
                                                          double epsilon) {
  const std::size_t n = g.vertex_count();
  const std::size_t choices = neg_corr_choices(d, epsilon);
  const std::size_t palette = neg_corr_palette(d, epsilon);
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : g.out(u)) {
      nb[u].push_back(v);
      nb[v].push_back(u);
    }
  }
  auto order = peel_order(g);
  std::reverse(order.begin(), order.end());
  std::vector<std::vector<double>> same(n, std::vector<double>(n, 0.0));
  std::vector<std::size_t> color(n, palette);
  const double step = 1.0 / static_cast<double>(choices);

  std::function<void(std::size_t, double)> visit = [&](std::size_t pos, double weight) {
    if (pos == n) {
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (color[u] == color[v]) same[u][v] += weight;
        }
      }
      return;
    }
    const std::size_t v = order[pos];
    std::vector<char> used(palette, 0);
    for (std::size_t w : nb[v]) {
      if (color[w] < palette) used[color[w]] = 1;
    }
    std::size_t taken = 0;
    for (std::size_t c = 0; c < palette && taken < choices; ++c) {
      if (used[c]) continue;
      ++taken;
      color[v] = c;
      visit(pos + 1, weight * step);
    }
    color[v] = palette;
    if (taken < choices) throw InternalError("too few free colors during enumeration");
  };
  visit(0, 1.0);
  return same;
}

template <typename Visit>
void enumerate_r0(const PackingInstance& inst, const FractionalSolution& x, const KcsParams& params,
                  Visit&& visit) {
  if (inst.n > kExactMaxItems) {
    throw SizeError("exact enumeration supports at most " + std::to_string(kExactMaxItems) +
                    " items, got " + std::to_string(inst.n));
  }
  const KcsRounder rounder(inst, x, params);
  const auto& p = rounder.probabilities();
  const std::size_t n = inst.n;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double prob = 1.0;
    std::vector<std::size_t> r0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) {
        prob *= p[j];
        r0.push_back(j);
      } else {
        prob *= 1.0 - p[j];
      }
    }
    if (prob == 0.0) continue;
    visit(rounder, ItemSet::from_sorted(std::move(r0)), prob);
  }
}

}  // namespace

std::vector<double> exact_inclusion_probabilities(const PackingInstance& inst,
                                                  const FractionalSolution& x,
                                                  const KcsParams& params) {
  std::vector<double> out(inst.n, 0.0);
  const double share = 1.0 / static_cast<double>(params.palette());
  enumerate_r0(inst, x, params, [&](const KcsRounder& r, const ItemSet& r0, double prob) {
    // Whatever color an R2 vertex receives, the uniform pick hits it with 1/palette.
    for (std::size_t j : r.survivors(r0)) out[j] += prob * share;
  });
  return out;
}

std::vector<std::vector<double>> exact_joint_probabilities(const PackingInstance& inst,
                                                           const FractionalSolution& x,
                                                           const KcsParams& params) {
  std::vector<std::vector<double>> out(inst.n, std::vector<double>(inst.n, 0.0));
  const double share = 1.0 / static_cast<double>(params.palette());
  enumerate_r0(inst, x, params, [&](const KcsRounder& r, const ItemSet& r0, double prob) {
    const ItemSet r1 = r.discard(r0);
    const ConflictGraph g = build_conflict_digraph(inst, r1);
    const ItemSet keep = remove_anomalous(g.graph, params.d);
    if (keep.empty()) return;
    const DiGraph reduced = g.graph.induced(keep.members());
    std::vector<std::vector<double>> same;
    if (params.epsilon) {
      same = same_color_probabilities(reduced, params.d, *params.epsilon);
    } else {
      const Coloring chi = color_directed_graph(reduced, params.d);
      same.assign(keep.size(), std::vector<double>(keep.size(), 0.0));
      for (std::size_t u = 0; u < keep.size(); ++u) {
        for (std::size_t v = 0; v < keep.size(); ++v) {
          if (chi.color[u] == chi.color[v]) same[u][v] = 1.0;
        }
      }
    }
    for (std::size_t u = 0; u < keep.size(); ++u) {
      for (std::size_t v = 0; v < keep.size(); ++v) {
        out[g.items[keep[u]]][g.items[keep[v]]] += prob * same[u][v] * share;
      }
    }
  });
  return out;
}

double conditional_inclusion(const PackingInstance& inst, const KcsParams& params,
                             const ItemSet& r0, std::size_t j) {
  if (j >= inst.n) throw ValidationError("item out of range");
  const KcsRounder rounder(inst, zero_solution(inst.n), params);
  if (!rounder.survivors(r0).contains(j)) return 0.0;
  return 1.0 / static_cast<double>(params.palette());
}

}  // namespace colsparse

#include "colsparse/ufptree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "colsparse/errors.hpp"
#include "colsparse/montecarlo.hpp"

namespace colsparse {

ValidationReport validate_tree(const TreeNetwork& net) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  const std::size_t n = net.vertex_count();
  if (n == 0) {
    add("tree has no vertices");
    return report;
  }
  if (net.root >= n) {
    add("root out of range");
    return report;
  }
  if (net.parent[net.root] != -1) add("root must have parent -1");
  if (net.edge_capacity.size() != n) add("edgeCapacity must have one entry per vertex");
  bool structure_ok = true;
  for (std::size_t v = 0; v < n; ++v) {
    if (v == net.root) continue;
    const auto p = net.parent[v];
    if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == v) {
      add("vertex " + std::to_string(v) + " has an invalid parent");
      structure_ok = false;
    }
  }
  if (structure_ok) {
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t cur = v;
      std::size_t steps = 0;
      while (cur != net.root && steps <= n) {
        cur = static_cast<std::size_t>(net.parent[cur]);
        ++steps;
      }
      if (cur != net.root) {
        add("vertex " + std::to_string(v) + " does not reach the root");
        break;
      }
    }
  }
  if (net.edge_capacity.size() == n) {
    for (std::size_t v = 0; v < n; ++v) {
      if (v == net.root) continue;
      const double u = net.edge_capacity[v];
      if (!(u >= 1.0) || std::floor(u) != u) {
        add("capacity of edge above vertex " + std::to_string(v) + " is not an integer >= 1");
      }
    }
  }
  for (std::size_t i = 0; i < net.demands.size(); ++i) {
    const auto& d = net.demands[i];
    if (d.s >= n || d.t >= n) add("demand " + std::to_string(i) + " endpoint out of range");
    if (d.s == d.t) add("demand " + std::to_string(i) + " has s == t");
    if (!(d.weight >= 0.0)) add("demand " + std::to_string(i) + " has negative weight");
  }
  return report;
}

namespace {

void require_valid(const TreeNetwork& net) {
  const auto report = validate_tree(net);
  if (!report.ok()) throw ValidationError("invalid tree network: " + report.violations.front());
}

}  // namespace

std::vector<std::size_t> depths(const TreeNetwork& net) {
  const std::size_t n = net.vertex_count();
  std::vector<std::size_t> depth(n, 0);
  std::vector<char> known(n, 0);
  known[net.root] = 1;
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t cur = v;
    while (!known[cur]) {
      stack.push_back(cur);
      cur = static_cast<std::size_t>(net.parent[cur]);
    }
    while (!stack.empty()) {
      const std::size_t w = stack.back();
      stack.pop_back();
      depth[w] = depth[static_cast<std::size_t>(net.parent[w])] + 1;
      known[w] = 1;
    }
  }
  return depth;
}

std::size_t lca(const TreeNetwork& net, const std::vector<std::size_t>& depth, std::size_t u,
                std::size_t v) {
  while (depth[u] > depth[v]) u = static_cast<std::size_t>(net.parent[u]);
  while (depth[v] > depth[u]) v = static_cast<std::size_t>(net.parent[v]);
  while (u != v) {
    u = static_cast<std::size_t>(net.parent[u]);
    v = static_cast<std::size_t>(net.parent[v]);
  }
  return u;
}

std::vector<std::size_t> path_edges(const TreeNetwork& net, const std::vector<std::size_t>& depth,
                                    std::size_t s, std::size_t t) {
  const std::size_t top = lca(net, depth, s, t);
  std::vector<std::size_t> edges;
  for (std::size_t v = s; v != top; v = static_cast<std::size_t>(net.parent[v])) edges.push_back(v);
  for (std::size_t v = t; v != top; v = static_cast<std::size_t>(net.parent[v])) edges.push_back(v);
  return edges;
}

std::vector<std::size_t> lca_order(const TreeNetwork& net) {
  require_valid(net);
  const auto depth = depths(net);
  std::vector<std::size_t> key(net.demands.size());
  for (std::size_t i = 0; i < net.demands.size(); ++i) {
    key[i] = depth[lca(net, depth, net.demands[i].s, net.demands[i].t)];
  }
  std::vector<std::size_t> order(net.demands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return order;
}

PackingInstance to_packing_instance(const TreeNetwork& net) {
  require_valid(net);
  const auto depth = depths(net);
  PackingInstance inst;
  inst.n = net.demands.size();
  inst.m = net.vertex_count();
  inst.capacities = net.edge_capacity;
  inst.capacities[net.root] = 1.0;  // no path uses the root slot
  for (const auto& d : net.demands) {
    std::vector<Entry> col;
    for (std::size_t e : path_edges(net, depth, d.s, d.t)) col.push_back({e, 1.0});
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
    inst.columns.push_back(std::move(col));
    inst.weights.push_back(d.weight);
  }
  return inst;
}

UfpParams UfpParams::from_alpha(double alpha, std::uint64_t sim_budget) {
  UfpParams p;
  p.alpha = alpha;
  const double ae = alpha * std::numbers::e;
  p.beta = 1.0 - 2.0 * ae / (1.0 - ae);
  p.sim_budget = sim_budget;
  p.validate();
  return p;
}

void UfpParams::validate() const {
  if (!(alpha > 0.0) || !(alpha * std::numbers::e < 1.0 / 3.0)) {
    throw ParamError("alpha must satisfy 0 < alpha e < 1/3");
  }
  if (!(beta > 0.0 && beta <= 1.0)) throw ParamError("beta must lie in (0,1]");
}

double ufp_balance(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) return -1.0;
  const double e = std::numbers::e;
  const double ae = alpha * e;
  if (ae >= 1.0) return -1.0;
  const double beta = 1.0 - 2.0 * ae / (1.0 - ae);
  const double gamma = alpha * beta;
  if (!(gamma * e >= 0.0 && gamma * e < 1.0 / 3.0)) return -1.0;
  return alpha * (1.0 - 2.0 * gamma * e / (1.0 - gamma * e));
}

AlphaOptimum optimize_alpha(double grid) {
  if (!(grid > 0.0 && grid <= 1e-5)) throw ParamError("grid resolution must lie in (0, 1e-5]");
  AlphaOptimum best;
  const auto steps = static_cast<std::uint64_t>(std::floor(1.0 / grid));
  for (std::uint64_t i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) * grid;
    const double v = ufp_balance(a);
    if (v > best.balance) {
      best.balance = v;
      best.alpha = a;
    }
  }
  return best;
}

std::uint64_t default_ufp_budget(double beta) {
  const EstimationSpec spec{std::min(1.0, beta), 0.05, 1e-3};
  return std::min(required_samples(spec), kUfpMaxDefaultBudget);
}

UfpScheme::UfpScheme(const TreeNetwork& net, const std::vector<double>& x, const UfpParams& params,
                     std::uint64_t seed)
    : net_(&net), params_(params) {
  require_valid(net);
  params_.validate();
  const std::size_t nd = net.demands.size();
  if (x.size() != nd) throw ValidationError("solution length does not match demand count");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("solution entry outside [0,1]");
    sample_.push_back(params_.alpha * v);
  }
  budget_ = params_.sim_budget ? params_.sim_budget : default_ufp_budget(params_.beta);
  order_ = lca_order(net);
  const auto depth = depths(net);
  for (const auto& d : net.demands) paths_.push_back(path_edges(net, depth, d.s, d.t));

  // Compact edge ids: only edges on some path matter.
  std::vector<std::size_t> slot(net.vertex_count(), net.vertex_count());
  std::vector<std::int64_t> cap;
  for (const auto& path : paths_) {
    for (std::size_t e : path) {
      if (slot[e] == net.vertex_count()) {
        slot[e] = cap.size();
        cap.push_back(static_cast<std::int64_t>(net.edge_capacity[e]));
      }
    }
  }
  std::vector<std::vector<std::size_t>> local(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t e : paths_[i]) local[i].push_back(slot[e]);
  }

  eta_.assign(nd, 0.0);
  keep_.assign(nd, 1.0);
  flagged_.assign(nd, 0);
  // Pool of simulated runs advanced demand by demand, so eta_i sees the attenuated
  // decisions already fixed for every earlier demand.
  const std::size_t E = cap.size();
  std::vector<std::int64_t> residual(budget_ * E);
  for (std::uint64_t s = 0; s < budget_; ++s) {
    std::copy(cap.begin(), cap.end(), residual.begin() + static_cast<std::ptrdiff_t>(s * E));
  }
  std::vector<Rng> streams;
  streams.reserve(budget_);
  for (std::uint64_t s = 0; s < budget_; ++s) streams.emplace_back(seed, 0xE7A0000000ULL + s);

  for (std::size_t i : order_) {
    const auto& path = local[i];
    std::uint64_t safe_runs = 0;
    std::vector<char> safe(budget_, 0);
    for (std::uint64_t s = 0; s < budget_; ++s) {
      const std::int64_t* r = &residual[s * E];
      bool ok = true;
      for (std::size_t e : path) ok = ok && r[e] >= 1;
      safe[s] = ok;
      safe_runs += ok;
    }
    eta_[i] = static_cast<double>(safe_runs) / static_cast<double>(budget_);
    if (eta_[i] > 0.0) {
      keep_[i] = std::min(1.0, params_.beta / eta_[i]);
      flagged_[i] = eta_[i] < params_.beta;
    }
    for (std::uint64_t s = 0; s < budget_; ++s) {
      Rng& rng = streams[s];
      const bool sampled = rng.bernoulli(sample_[i]);
      if (!sampled || !safe[s]) continue;
      if (!rng.bernoulli(keep_[i])) continue;
      std::int64_t* r = &residual[s * E];
      for (std::size_t e : path) --r[e];
    }
  }
}

std::size_t UfpScheme::flagged_count() const {
  return static_cast<std::size_t>(std::count(flagged_.begin(), flagged_.end(), 1));
}

ItemSet UfpScheme::round(Rng& rng) const {
  const std::size_t nd = net_->demands.size();
  std::vector<char> sampled(nd, 0);
  for (std::size_t i = 0; i < nd; ++i) sampled[i] = rng.bernoulli(sample_[i]);
  std::vector<std::int64_t> residual(net_->vertex_count(), 0);
  for (std::size_t v = 0; v < residual.size(); ++v) {
    residual[v] = static_cast<std::int64_t>(net_->edge_capacity[v]);
  }
  std::vector<std::size_t> routed;
  for (std::size_t i : order_) {
    if (!sampled[i]) continue;
    const auto& path = paths_[i];
    const bool safe = std::all_of(path.begin(), path.end(), [&](std::size_t e) { return residual[e] >= 1; });
    if (!safe) continue;
    if (eta_[i] == 0.0) {
      throw EstimateError("demand " + std::to_string(i) +
                          " reached the keep step with a zero safety estimate");
    }
    if (!rng.bernoulli(keep_[i])) continue;
    for (std::size_t e : path) {
      if (--residual[e] < 0) throw InternalError("routing exceeded an edge capacity");
    }
    routed.push_back(i);
  }
  return ItemSet(std::move(routed));
}

ItemSet cr_round(const TreeNetwork& net, const FractionalSolution& x, const UfpParams& params,
                 Rng& rng) {
  const UfpScheme scheme(net, x.x, params, rng());
  return scheme.round(rng);
}

bool routing_feasible(const TreeNetwork& net, const ItemSet& chosen) {
  const auto depth = depths(net);
  std::vector<double> load(net.vertex_count(), 0.0);
  for (std::size_t i : chosen) {
    for (std::size_t e : path_edges(net, depth, net.demands[i].s, net.demands[i].t)) load[e] += 1.0;
  }
  for (std::size_t v = 0; v < load.size(); ++v) {
    if (v != net.root && load[v] > net.edge_capacity[v] + kCapacityTolerance) return false;
  }
  return true;
}

}  // namespace colsparse

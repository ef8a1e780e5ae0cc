#include "colsparse/sksp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "colsparse/errors.hpp"

namespace colsparse {

double StochasticItem::expected_weight() const {
  double w = 0.0;
  for (const Scenario& s : scenarios) w += s.probability * s.weight;
  return w;
}

std::vector<double> StochasticItem::expected_size() const {
  std::vector<double> u(support.size(), 0.0);
  for (const Scenario& s : scenarios) {
    for (std::size_t t = 0; t < support.size() && t < s.size.size(); ++t) {
      u[t] += s.probability * s.size[t];
    }
  }
  return u;
}

std::size_t StochasticInstance::sparsity() const {
  std::size_t k = 1;
  for (const auto& item : items) k = std::max(k, item.support.size());
  return k;
}

PackingInstance StochasticInstance::expected_instance() const {
  PackingInstance inst;
  inst.n = items.size();
  inst.m = m;
  inst.capacities = capacities;
  inst.columns.resize(inst.n);
  for (std::size_t j = 0; j < inst.n; ++j) {
    const auto u = items[j].expected_size();
    for (std::size_t t = 0; t < u.size(); ++t) {
      if (u[t] > 0.0) inst.columns[j].push_back({items[j].support[t], std::min(1.0, u[t])});
    }
    inst.weights.push_back(items[j].expected_weight());
  }
  return inst;
}

ValidationReport validate_stochastic(const StochasticInstance& inst) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  if (inst.capacities.size() != inst.m) add("capacity count does not match m");
  for (std::size_t i = 0; i < inst.capacities.size(); ++i) {
    const double b = inst.capacities[i];
    if (!(b >= 1.0) || std::floor(b) != b) add("capacity of row " + std::to_string(i) + " is not an integer >= 1");
  }
  for (std::size_t j = 0; j < inst.items.size(); ++j) {
    const auto& item = inst.items[j];
    const std::string tag = "item " + std::to_string(j) + ": ";
    auto rows = item.support;
    std::sort(rows.begin(), rows.end());
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) add(tag + "duplicate support row");
    for (std::size_t r : rows) {
      if (r >= inst.m) add(tag + "support row " + std::to_string(r) + " out of range");
    }
    if (item.scenarios.empty()) add(tag + "no scenarios");
    double total = 0.0;
    for (const Scenario& s : item.scenarios) {
      if (!(s.probability >= 0.0)) add(tag + "negative scenario probability");
      if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) add(tag + "negative scenario weight");
      if (s.size.size() != item.support.size()) add(tag + "size vector length differs from support");
      for (auto bit : s.size) {
        if (bit > 1) add(tag + "size entries must be 0 or 1");
      }
      total += s.probability;
    }
    if (!item.scenarios.empty() && std::abs(total - 1.0) > 1e-9) {
      add(tag + "scenario probabilities sum to " + std::to_string(total));
    }
  }
  return report;
}

double ChanceSchedule::total_beta() const {
  double s = 0.0;
  for (double b : betas) s += b;
  return s;
}

ChanceSchedule compute_schedule(std::size_t T, std::optional<std::size_t> k) {
  if (T < 1) throw ParamError("T must be at least 1");
  if (k && *k < 1) throw ParamError("k must be at least 1");
  ChanceSchedule s;
  s.T = T;
  double beta_star_sum = 0.0;
  double alpha_sum = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double alpha = 1.0 - beta_star_sum;
    const double beta_star = 0.5 * alpha * alpha;
    double beta = beta_star;
    if (k) beta = std::max(0.0, beta_star - alpha * alpha_sum / static_cast<double>(*k));
    s.alphas.push_back(alpha);
    s.betas.push_back(beta);
    beta_star_sum += beta_star;
    alpha_sum += alpha;
  }
  return s;
}

std::vector<double> gamma_sequence(std::size_t T) {
  std::vector<double> g;
  double gamma = 0.5;
  for (std::size_t t = 0; t < T; ++t) {
    if (t > 0) gamma = 0.5 * (1.0 + gamma * gamma);
    g.push_back(gamma);
  }
  return g;
}

bool schedule_feasible(const ChanceSchedule& s) {
  if (s.alphas.size() != s.T || s.betas.size() != s.T) return false;
  double prefix = 0.0;
  for (std::size_t t = 0; t < s.T; ++t) {
    const double a = s.alphas[t];
    const double b = s.betas[t];
    if (a < 0.0 || b < 0.0) return false;
    if (b > a * (1.0 - prefix - a / 2.0) + 1e-12) return false;
    prefix += b;
  }
  return true;
}

std::size_t default_chances(std::size_t k) {
  if (k <= 1) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(k)) - 1e-12)));
}

ItemSet ProbeResult::items() const { return ItemSet(added); }

namespace {

void require_valid(const StochasticInstance& inst, const std::vector<double>& x) {
  const auto report = validate_stochastic(inst);
  if (!report.ok()) throw ValidationError("invalid stochastic instance: " + report.violations.front());
  if (x.size() != inst.n()) throw ValidationError("solution length does not match item count");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("solution entry outside [0,1]");
  }
}

std::vector<std::int64_t> initial_residual(const StochasticInstance& inst) {
  std::vector<std::int64_t> r;
  for (double b : inst.capacities) r.push_back(static_cast<std::int64_t>(b));
  return r;
}

// Worst case over scenarios: a row blocks j only if some scenario uses it.
bool is_safe(const StochasticItem& item, const std::vector<std::int64_t>& residual) {
  for (std::size_t t = 0; t < item.support.size(); ++t) {
    if (residual[item.support[t]] >= 1) continue;
    for (const Scenario& s : item.scenarios) {
      if (s.size[t] != 0) return false;
    }
  }
  return true;
}

// Reveals one scenario and consumes its sizes; returns the realized weight.
double probe(const StochasticItem& item, Rng& rng, std::vector<std::int64_t>& residual) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t pick = item.scenarios.size() - 1;
  for (std::size_t s = 0; s < item.scenarios.size(); ++s) {
    acc += item.scenarios[s].probability;
    if (u < acc) {
      pick = s;
      break;
    }
  }
  const Scenario& sc = item.scenarios[pick];
  for (std::size_t t = 0; t < item.support.size(); ++t) {
    auto& r = residual[item.support[t]];
    r -= sc.size[t];
    if (r < 0) throw InternalError("probing exceeded a capacity");
  }
  return sc.weight;
}

}  // namespace

ProbeResult probe_run_single(const StochasticInstance& inst, const std::vector<double>& x,
                             double alpha, Rng& rng) {
  require_valid(inst, x);
  if (!(alpha >= 0.0)) throw ParamError("alpha must be nonnegative");
  const double k = static_cast<double>(inst.sparsity());
  auto residual = initial_residual(inst);
  std::vector<std::size_t> marked;
  for (std::size_t j = 0; j < inst.n(); ++j) {
    if (rng.bernoulli(std::min(1.0, alpha * x[j] / k))) marked.push_back(j);
  }
  rng.shuffle(std::span<std::size_t>(marked));
  ProbeResult out;
  for (std::size_t j : marked) {
    if (!is_safe(inst.items[j], residual)) continue;
    const double w = probe(inst.items[j], rng, residual);
    out.added.push_back(j);
    out.chance.push_back(0);
    out.weight.push_back(w);
    out.total_weight += w;
  }
  return out;
}

MultiChancePlan::MultiChancePlan(const StochasticInstance& inst, std::vector<double> x,
                                 ChanceSchedule schedule, PlanOptions options)
    : inst_(&inst), x_(std::move(x)), schedule_(std::move(schedule)), options_(options) {
  require_valid(inst, x_);
  const std::size_t T = schedule_.T;
  if (T < 1 || schedule_.alphas.size() != T || schedule_.betas.size() != T) {
    throw ParamError("schedule must list T alphas and T betas");
  }
  for (std::size_t t = 0; t < T; ++t) {
    if (!(schedule_.alphas[t] >= 0.0) || !(schedule_.betas[t] >= 0.0)) {
      throw ParamError("schedule entries must be nonnegative");
    }
  }
  const std::size_t n = inst.n();
  k_ = static_cast<double>(inst.sparsity());
  mark_.assign(T, std::vector<double>(n, 0.0));
  first_mark_.assign(T, std::vector<double>(n, 0.0));
  keep_.assign(T, std::vector<double>(n, 1.0));
  estimate_.assign(T, std::vector<double>(n, 0.0));
  flagged_.assign(T, std::vector<char>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    double unmarked = 1.0;
    for (std::size_t t = 0; t < T; ++t) {
      mark_[t][j] = std::min(1.0, schedule_.alphas[t] * x_[j] / k_);
      first_mark_[t][j] = unmarked * mark_[t][j];
      unmarked *= 1.0 - mark_[t][j];
    }
  }

  sim_budget_ = options_.sim_budget;
  if (sim_budget_ == 0) {
    double c = 1.0;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t j = 0; j < n; ++j) {
        if (first_mark_[t][j] > 0.0 && target(t, j) > 0.0) {
          c = std::min(c, target(t, j) / first_mark_[t][j]);
        }
      }
    }
    sim_budget_ = required_samples({c, 0.01, 1e-4});
  }

  Rng rng(options_.seed, 0x51C5);
  for (std::size_t t = 0; t < T; ++t) estimate_chance(t, rng);
}

double MultiChancePlan::target(std::size_t t, std::size_t j) const {
  return schedule_.betas[t] * x_[j] / k_;
}

std::size_t MultiChancePlan::flagged_count() const {
  std::size_t c = 0;
  for (const auto& row : flagged_) c += static_cast<std::size_t>(std::count(row.begin(), row.end(), 1));
  return c;
}

void MultiChancePlan::estimate_chance(std::size_t t, Rng& rng) {
  const std::size_t n = inst_->n();
  const bool attenuate = options_.attenuate_final || t + 1 < schedule_.T;
  const std::size_t passes = attenuate ? options_.refinements + 1 : 1;
  const auto start = initial_residual(*inst_);

  std::vector<std::int64_t> residual;
  std::vector<char> fired(n);
  std::vector<char> marked(n);
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::uint64_t> eligible(n);
  std::vector<std::uint64_t> safe(n);

  // One chance of the algorithm; `track` records safety of every not-yet-marked
  // item at its position in the order.
  auto chance = [&](std::size_t c, Rng& r, bool track) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (fired[j]) continue;
      order.push_back(j);
      marked[j] = r.bernoulli(mark_[c][j]);
      if (marked[j]) fired[j] = 1;
    }
    r.shuffle(std::span<std::size_t>(order));
    for (std::size_t j : order) {
      const bool ok = is_safe(inst_->items[j], residual);
      if (track) {
        ++eligible[j];
        if (ok) ++safe[j];
      }
      if (marked[j] && ok && r.bernoulli(keep_[c][j])) probe(inst_->items[j], r, residual);
    }
  };

  for (std::size_t pass = 0; pass < passes; ++pass) {
    std::fill(eligible.begin(), eligible.end(), 0);
    std::fill(safe.begin(), safe.end(), 0);
    const Rng pass_rng = rng.split(t * 1000 + pass);
    for (std::uint64_t s = 0; s < sim_budget_; ++s) {
      Rng r = pass_rng.split(s);
      residual = start;
      std::fill(fired.begin(), fired.end(), 0);
      for (std::size_t c = 0; c < t; ++c) chance(c, r, false);
      chance(t, r, true);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double s_rate =
          eligible[j] ? static_cast<double>(safe[j]) / static_cast<double>(eligible[j]) : 0.0;
      const double est = first_mark_[t][j] * s_rate;
      estimate_[t][j] = est;
      flagged_[t][j] = 0;
      if (!attenuate) {
        keep_[t][j] = 1.0;
        continue;
      }
      const double goal = target(t, j);
      if (goal <= 0.0) {
        keep_[t][j] = 0.0;
        continue;
      }
      if (est >= goal) {
        keep_[t][j] = goal / est;
        continue;
      }
      // Natural rate below target: accept only if it is within sampling noise.
      const double rel = (s_rate > 0.0 && eligible[j] > 0)
                             ? 3.0 * std::sqrt((1.0 - s_rate) / (s_rate * static_cast<double>(eligible[j])))
                             : 0.0;
      if (est > 0.0 && est * (1.0 + rel) >= goal) {
        keep_[t][j] = 1.0;
        flagged_[t][j] = 1;
      } else {
        throw AttenuationError("chance " + std::to_string(t + 1) + ", item " + std::to_string(j) +
                               ": estimated add rate " + std::to_string(est) +
                               " is below the target " + std::to_string(goal));
      }
    }
  }
}

ProbeResult MultiChancePlan::run(Rng& rng) const {
  const std::size_t n = inst_->n();
  auto residual = initial_residual(*inst_);
  std::vector<char> fired(n, 0);
  std::vector<std::size_t> candidates;
  candidates.reserve(n);
  ProbeResult out;
  for (std::size_t t = 0; t < schedule_.T; ++t) {
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (!fired[j] && rng.bernoulli(mark_[t][j])) {
        fired[j] = 1;
        candidates.push_back(j);
      }
    }
    rng.shuffle(std::span<std::size_t>(candidates));
    for (std::size_t j : candidates) {
      if (!is_safe(inst_->items[j], residual)) continue;
      if (!rng.bernoulli(keep_[t][j])) continue;
      const double w = probe(inst_->items[j], rng, residual);
      out.added.push_back(j);
      out.chance.push_back(t);
      out.weight.push_back(w);
      out.total_weight += w;
    }
  }
  return out;
}

ProbeResult run_multichance(const StochasticInstance& inst, const std::vector<double>& x,
                            const ChanceSchedule& schedule, Rng& rng, std::uint64_t sim_budget) {
  PlanOptions options;
  options.sim_budget = sim_budget;
  options.seed = rng();
  const MultiChancePlan plan(inst, x, schedule, options);
  return plan.run(rng);
}

MeanEstimate expected_weight(const std::vector<ProbeResult>& runs) {
  std::vector<double> totals;
  totals.reserve(runs.size());
  for (const auto& r : runs) totals.push_back(r.total_weight);
  return summarize(totals);
}

}  // namespace colsparse

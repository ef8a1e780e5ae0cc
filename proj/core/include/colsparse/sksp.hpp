#pragma once

// Stochastic k-set packing with 0/1 sizes: safe sequential probing over one or
// several chances, each chance attenuated by simulation to a target add rate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "colsparse/instance.hpp"
#include "colsparse/montecarlo.hpp"
#include "colsparse/rng.hpp"

namespace colsparse {

struct Scenario {
  double probability = 0.0;
  double weight = 0.0;
  std::vector<std::uint8_t> size;  // one 0/1 entry per support row
};

struct StochasticItem {
  std::vector<std::size_t> support;
  std::vector<Scenario> scenarios;

  double expected_weight() const;
  /// expected_size()[t] = E[S] on support[t].
  std::vector<double> expected_size() const;
};

struct StochasticInstance {
  std::size_t m = 0;
  std::vector<double> capacities;  // integers >= 1
  std::vector<StochasticItem> items;

  std::size_t n() const { return items.size(); }
  /// max |support|, at least 1.
  std::size_t sparsity() const;
  /// Deterministic instance (u_ij, b, w) the LP relaxation is written over.
  PackingInstance expected_instance() const;
};

ValidationReport validate_stochastic(const StochasticInstance& inst);

struct ChanceSchedule {
  std::size_t T = 0;
  std::vector<double> alphas;
  std::vector<double> betas;

  double total_beta() const;
};

/// Optimal schedule of the simplified program, with the 1/k correction of the betas
/// when k is given (nullopt means the k -> infinity limit).
ChanceSchedule compute_schedule(std::size_t T, std::optional<std::size_t> k);

/// gamma_1 = 1/2, gamma_t = (1 + gamma_{t-1}^2) / 2; returns gamma_1..gamma_T.
std::vector<double> gamma_sequence(std::size_t T);

/// Checks 0 <= beta_t <= alpha_t (1 - sum_{t'<t} beta_t' - alpha_t/2) and alpha_t >= 0.
bool schedule_feasible(const ChanceSchedule& s);

/// max(1, ceil(ln k)).
std::size_t default_chances(std::size_t k);

struct ProbeResult {
  std::vector<std::size_t> added;   // in order of addition
  std::vector<std::size_t> chance;  // chance (0-based) of each addition
  std::vector<double> weight;       // realized weight of each addition
  double total_weight = 0.0;

  ItemSet items() const;
};

/// One run of single-chance probing: mark j with probability min(1, alpha x_j / k),
/// scan marked items in uniform random order, probe each safe one.
ProbeResult probe_run_single(const StochasticInstance& inst, const std::vector<double>& x,
                             double alpha, Rng& rng);

struct PlanOptions {
  std::uint64_t sim_budget = 0;   // 0: derive from the sample-size rule
  std::size_t refinements = 3;    // extra passes that account for same-chance attenuation
  bool attenuate_final = true;    // false skips attenuation in the last chance
  std::uint64_t seed = 0;         // seeds the estimation simulations
};

/// Attenuation table for a schedule, estimated once and reused by every run.
class MultiChancePlan {
 public:
  MultiChancePlan(const StochasticInstance& inst, std::vector<double> x, ChanceSchedule schedule,
                  PlanOptions options = {});

  ProbeResult run(Rng& rng) const;

  const ChanceSchedule& schedule() const { return schedule_; }
  /// keep(t, j): probability a safe chance-t candidate is actually probed.
  double keep(std::size_t t, std::size_t j) const { return keep_[t][j]; }
  /// Estimated un-attenuated add rate of j in chance t.
  double estimate(std::size_t t, std::size_t j) const { return estimate_[t][j]; }
  bool flagged(std::size_t t, std::size_t j) const { return flagged_[t][j] != 0; }
  std::size_t flagged_count() const;
  /// beta_t x_j / k.
  double target(std::size_t t, std::size_t j) const;
  /// Probability j is first marked in chance t.
  double first_mark(std::size_t t, std::size_t j) const { return first_mark_[t][j]; }
  std::uint64_t sim_budget() const { return sim_budget_; }

 private:
  void estimate_chance(std::size_t t, Rng& rng);

  const StochasticInstance* inst_;
  std::vector<double> x_;
  ChanceSchedule schedule_;
  PlanOptions options_;
  double k_;
  std::uint64_t sim_budget_ = 0;
  std::vector<std::vector<double>> mark_;        // min(1, alpha_t x_j / k)
  std::vector<std::vector<double>> first_mark_;
  std::vector<std::vector<double>> keep_;
  std::vector<std::vector<double>> estimate_;
  std::vector<std::vector<char>> flagged_;
};

/// Plan + one run. Prefer MultiChancePlan when running many trials.
ProbeResult run_multichance(const StochasticInstance& inst, const std::vector<double>& x,
                            const ChanceSchedule& schedule, Rng& rng, std::uint64_t sim_budget);

/// Mean realized total weight and its standard error.
MeanEstimate expected_weight(const std::vector<ProbeResult>& runs);

}  // namespace colsparse

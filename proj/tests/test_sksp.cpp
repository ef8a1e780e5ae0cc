#include <gtest/gtest.h>

#include <cmath>

#include "colsparse/errors.hpp"
#include "colsparse/harness.hpp"
#include "colsparse/sksp.hpp"
#include "support.hpp"

using namespace colsparse;

namespace {

StochasticItem deterministic(std::vector<std::size_t> support, std::vector<std::uint8_t> size,
                             double weight = 1.0) {
  StochasticItem item;
  item.support = std::move(support);
  item.scenarios.push_back({1.0, weight, std::move(size)});
  return item;
}

// Six unit-weight items on three rows of capacity 2; item j uses rows j and j+1 (mod 3).
StochasticInstance ring_instance() {
  StochasticInstance inst;
  inst.m = 3;
  inst.capacities = {2, 2, 2};
  for (std::size_t j = 0; j < 6; ++j) inst.items.push_back(deterministic({j % 3, (j + 1) % 3}, {1, 1}));
  return inst;
}

ChanceSchedule limit_two() { return {2, {1.0, 0.5}, {0.5, 0.125}}; }

}  // namespace

TEST(Schedule, SingleChance) {
  for (std::optional<std::size_t> k : {std::optional<std::size_t>{}, std::optional<std::size_t>{1},
                                       std::optional<std::size_t>{7}}) {
    const auto s = compute_schedule(1, k);
    EXPECT_DOUBLE_EQ(s.alphas[0], 1.0);
    EXPECT_DOUBLE_EQ(s.betas[0], 0.5);
  }
}

TEST(Schedule, TwoChanceLimit) {
  const auto s = compute_schedule(2, std::nullopt);
  EXPECT_EQ(s.alphas, (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(s.betas, (std::vector<double>{0.5, 0.125}));
  EXPECT_DOUBLE_EQ(s.total_beta(), 5.0 / 8.0);
}

TEST(Schedule, ThreeChanceLimitSum) {
  EXPECT_NEAR(compute_schedule(3, std::nullopt).total_beta(), 89.0 / 128.0, 1e-15);
}

TEST(Schedule, LargeKApproachesLimit) {
  const auto s = compute_schedule(2, 1000000);
  EXPECT_NEAR(s.betas[0], 0.5, 1e-12);
  EXPECT_NEAR(s.betas[1], 0.125, 1e-6);
  EXPECT_LT(s.betas[1], 0.125);
}

TEST(Schedule, SmallKCorrectionClampsAtZero) {
  const auto s = compute_schedule(2, 2);
  EXPECT_DOUBLE_EQ(s.betas[1], 0.0);
  EXPECT_TRUE(schedule_feasible(s));
}

TEST(Schedule, LimitSchedulesAreFeasibleAndMatchGamma) {
  for (std::size_t T = 1; T <= 25; ++T) {
    const auto s = compute_schedule(T, std::nullopt);
    EXPECT_TRUE(schedule_feasible(s)) << T;
    EXPECT_NEAR(s.total_beta(), gamma_sequence(T).back(), 1e-12) << T;
  }
}

TEST(Schedule, Infeasible) {
  EXPECT_FALSE(schedule_feasible({1, {1.0}, {0.6}}));
  EXPECT_FALSE(schedule_feasible({2, {1.0}, {0.5}}));
  EXPECT_THROW(compute_schedule(0, std::nullopt), ParamError);
}

TEST(Gamma, Sequence) {
  const auto g = gamma_sequence(20);
  EXPECT_NEAR(g[0], 0.5, 1e-12);
  EXPECT_NEAR(g[1], 5.0 / 8.0, 1e-12);
  EXPECT_NEAR(g[2], 89.0 / 128.0, 1e-12);
  for (std::size_t t = 1; t < g.size(); ++t) {
    EXPECT_GT(g[t], g[t - 1]);
    EXPECT_LE(g[t], 1.0);
  }
  EXPECT_GT(g[19], 0.9);
}

TEST(DefaultChances, Values) {
  EXPECT_EQ(default_chances(1), 1u);
  EXPECT_EQ(default_chances(2), 1u);
  EXPECT_EQ(default_chances(3), 2u);
  EXPECT_EQ(default_chances(100), 5u);
}

TEST(Validate, Stochastic) {
  StochasticInstance inst = ring_instance();
  EXPECT_TRUE(validate_stochastic(inst).ok());
  inst.items[0].scenarios[0].probability = 0.9;
  EXPECT_TRUE(validate_stochastic(inst).mentions("sum to"));
  inst = ring_instance();
  inst.capacities[0] = 1.5;
  EXPECT_FALSE(validate_stochastic(inst).ok());
  inst = ring_instance();
  inst.items[1].scenarios[0].size = {1};
  EXPECT_TRUE(validate_stochastic(inst).mentions("length"));
}

TEST(ExpectedInstance, Sizes) {
  StochasticInstance inst;
  inst.m = 2;
  inst.capacities = {1, 1};
  StochasticItem item;
  item.support = {0, 1};
  item.scenarios = {{0.25, 4.0, {1, 0}}, {0.75, 0.0, {1, 1}}};
  inst.items.push_back(item);
  const auto det = inst.expected_instance();
  EXPECT_DOUBLE_EQ(det.weights[0], 1.0);
  ASSERT_EQ(det.columns[0].size(), 2u);
  EXPECT_DOUBLE_EQ(det.columns[0][0].coeff, 1.0);
  EXPECT_DOUBLE_EQ(det.columns[0][1].coeff, 0.75);
}

TEST(ProbeSingle, ZeroSizeAlwaysAdded) {
  StochasticInstance inst;
  inst.m = 1;
  inst.capacities = {1};
  inst.items.push_back(deterministic({0}, {1}));
  inst.items.push_back(deterministic({0}, {0}));
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const auto r = probe_run_single(inst, {1.0, 1.0}, 1.0, rng);
    EXPECT_TRUE(r.items().contains(1));
    EXPECT_TRUE(r.items().contains(0));
  }
}

TEST(ProbeSingle, CapacityExhaustion) {
  StochasticInstance inst;
  inst.m = 1;
  inst.capacities = {1};
  inst.items.push_back(deterministic({0}, {1}));
  inst.items.push_back(deterministic({0}, {1}));
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const auto r = probe_run_single(inst, {1.0, 1.0}, 1.0, rng);
    EXPECT_EQ(r.added.size(), 1u);
  }
}

TEST(ProbeSingle, SingleItemRate) {
  StochasticInstance inst;
  inst.m = 2;
  inst.capacities = {1, 1};
  inst.items.push_back(deterministic({0, 1}, {1, 1}));
  Rng rng(3);
  const std::uint64_t n = 1000000;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < n; ++t) hits += probe_run_single(inst, {0.6}, 1.0, rng).added.size();
  EXPECT_TRUE(test::within_sigma(static_cast<double>(hits) / n, 0.6 / 2.0, n, 3.0));
}

TEST(Plan, SingleChanceMatchesTarget) {
  const auto inst = ring_instance();
  const std::vector<double> x(6, 0.5);
  const ChanceSchedule s = compute_schedule(1, std::nullopt);
  PlanOptions opt;
  opt.sim_budget = 200000;
  opt.seed = 4;
  const MultiChancePlan plan(inst, x, s, opt);
  const std::uint64_t n = 200000;
  std::vector<std::uint64_t> count(6, 0);
  Rng base(5);
  for (std::uint64_t t = 0; t < n; ++t) {
    Rng r = base.split(t);
    for (std::size_t j : plan.run(r).added) ++count[j];
  }
  for (std::size_t j = 0; j < 6; ++j) {
    EXPECT_TRUE(test::within_sigma(static_cast<double>(count[j]) / n, 0.5 * 0.5 / 2.0, n, 4.0)) << j;
  }
}

TEST(Plan, TwoChancesExclusiveAndOnTarget) {
  const auto inst = ring_instance();
  const std::vector<double> x(6, 0.5);
  PlanOptions opt;
  opt.sim_budget = 400000;
  opt.seed = 6;
  const MultiChancePlan plan(inst, x, limit_two(), opt);
  const std::uint64_t n = 200000;
  std::vector<std::vector<std::uint64_t>> count(2, std::vector<std::uint64_t>(6, 0));
  Rng base(7);
  for (std::uint64_t t = 0; t < n; ++t) {
    Rng r = base.split(t);
    const auto res = plan.run(r);
    ASSERT_EQ(res.items().size(), res.added.size());  // nobody added twice
    for (std::size_t q = 0; q < res.added.size(); ++q) ++count[res.chance[q]][res.added[q]];
  }
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t j = 0; j < 6; ++j) {
      const double target = plan.target(t, j);
      EXPECT_TRUE(test::within_sigma(static_cast<double>(count[t][j]) / n, target, n, 4.0))
          << "chance " << t << " item " << j << ": " << count[t][j] / double(n) << " vs " << target;
    }
  }
}

TEST(Plan, FirstMarkProbabilities) {
  const auto inst = ring_instance();
  const std::vector<double> x(6, 0.5);
  PlanOptions opt;
  opt.sim_budget = 1000;
  const MultiChancePlan plan(inst, x, limit_two(), opt);
  EXPECT_DOUBLE_EQ(plan.first_mark(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(plan.first_mark(1, 0), 0.75 * 0.125);
  EXPECT_DOUBLE_EQ(plan.target(1, 0), 0.125 * 0.5 / 2.0);
}

TEST(Plan, UnreachableTargetThrows) {
  // Every item is blocked by any other probed item; a huge beta cannot be met.
  StochasticInstance inst;
  inst.m = 1;
  inst.capacities = {1};
  for (int j = 0; j < 4; ++j) inst.items.push_back(deterministic({0}, {1}));
  PlanOptions opt;
  opt.sim_budget = 20000;
  EXPECT_THROW(MultiChancePlan(inst, std::vector<double>(4, 1.0), ChanceSchedule{1, {1.0}, {1.0}}, opt),
               AttenuationError);
}

TEST(Plan, ReproducibleForSeed) {
  const auto inst = ring_instance();
  PlanOptions opt;
  opt.sim_budget = 5000;
  opt.seed = 9;
  const MultiChancePlan a(inst, std::vector<double>(6, 0.5), limit_two(), opt);
  const MultiChancePlan b(inst, std::vector<double>(6, 0.5), limit_two(), opt);
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(a.keep(t, j), b.keep(t, j));
  }
}

TEST(Plan, NeverExceedsCapacityOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = gen_sksp_instance(10, 6, 3, 3, seed);
    PlanOptions opt;
    opt.sim_budget = 2000;
    opt.attenuate_final = false;
    const MultiChancePlan plan(inst, std::vector<double>(10, 0.3), compute_schedule(2, std::nullopt), opt);
    Rng rng(seed);
    for (int t = 0; t < 2000; ++t) {
      // probe() throws InternalError on any overflow, so surviving runs are feasible.
      EXPECT_NO_THROW(plan.run(rng));
    }
  }
}

TEST(ExpectedWeight, ZeroWeights) {
  StochasticInstance inst;
  inst.m = 1;
  inst.capacities = {1};
  inst.items.push_back(deterministic({0}, {1}, 0.0));
  Rng rng(10);
  std::vector<ProbeResult> runs;
  for (int t = 0; t < 100; ++t) runs.push_back(run_multichance(inst, {1.0}, compute_schedule(1, 1), rng, 1000));
  EXPECT_EQ(expected_weight(runs).mean, 0.0);
}

TEST(ExpectedWeight, SingleItemClosedForm) {
  StochasticInstance inst;
  inst.m = 1;
  inst.capacities = {1};
  inst.items.push_back(deterministic({0}, {1}, 1.0));
  PlanOptions opt;
  opt.sim_budget = 1000;
  const MultiChancePlan plan(inst, {0.8}, compute_schedule(1, 1), opt);
  std::vector<ProbeResult> runs;
  Rng rng(11);
  const std::uint64_t n = 200000;
  for (std::uint64_t t = 0; t < n; ++t) runs.push_back(plan.run(rng));
  const auto m = expected_weight(runs);
  EXPECT_TRUE(test::within_sigma(m.mean, 0.5 * 0.8, n, 4.0));
}

TEST(Generator, SkspInstances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = gen_sksp_instance(12, 8, 3, 4, seed);
    EXPECT_TRUE(validate_stochastic(inst).ok());
    for (const auto& item : inst.items) {
      EXPECT_LE(item.support.size(), 3u);
      double total = 0.0;
      for (const auto& s : item.scenarios) total += s.probability;
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

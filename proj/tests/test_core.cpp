#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "colsparse/errors.hpp"
#include "colsparse/harness.hpp"
#include "colsparse/instance.hpp"
#include "colsparse/rng.hpp"
#include "support.hpp"

using namespace colsparse;

TEST(Rng, SameSeedAndStreamReplay) {
  Rng a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, StreamsDiffer) {
  Rng a(42, 0), b(42, 1), c(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    same_ab += x == b();
    same_ac += x == c();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, BelowIsRoughlyUniform) {
  Rng rng(3);
  const std::size_t buckets = 7;
  const int n = 70000;
  std::vector<int> count(buckets, 0);
  for (int i = 0; i < n; ++i) ++count[rng.below(buckets)];
  double chi2 = 0.0;
  const double expect = static_cast<double>(n) / buckets;
  for (int c : count) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 22.5);  // 6 dof, p ~ 0.001
}

TEST(Rng, BernoulliClamps) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_FALSE(rng.bernoulli(-1.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
    EXPECT_TRUE(rng.bernoulli(2.0));
  }
}

TEST(Rng, ShuffleIsPermutation) {
  Rng rng(9);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  Rng a(11), b(11);
  (void)a.split(3);
  EXPECT_EQ(a(), b());
}

TEST(ItemSet, SortsAndDedupes) {
  ItemSet s{5, 1, 3, 1};
  EXPECT_EQ(s.members(), (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_TRUE(s.contains(3));
  EXPECT_FALSE(s.contains(2));
}

TEST(Validate, MinimalInstanceIsValid) {
  const auto inst = PackingInstance::with_unit_capacities(1, {{{0, 0.5}}}, {1.0});
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(Validate, CoefficientAboveOne) {
  const auto inst = PackingInstance::with_unit_capacities(1, {{{0, 1.5}}}, {1.0});
  const auto rep = validate_instance(inst);
  EXPECT_FALSE(rep.ok());
  EXPECT_TRUE(rep.mentions("coefficient out of (0,1]"));
}

TEST(Validate, NonPositiveCoefficient) {
  const auto inst = PackingInstance::with_unit_capacities(1, {{{0, 0.0}}}, {1.0});
  EXPECT_TRUE(validate_instance(inst).mentions("coefficient out of (0,1]"));
}

TEST(Validate, DuplicateRow) {
  const auto inst = PackingInstance::with_unit_capacities(2, {{{0, 0.5}, {0, 0.2}}}, {1.0});
  EXPECT_TRUE(validate_instance(inst).mentions("duplicate row in column"));
}

TEST(Validate, ShapeMismatchesAndBadValues) {
  PackingInstance inst = PackingInstance::with_unit_capacities(1, {{{3, 0.5}}}, {-1.0});
  inst.capacities = {0.5};
  const auto rep = validate_instance(inst);
  EXPECT_TRUE(rep.mentions("out of range"));
  EXPECT_TRUE(rep.mentions("negative weight"));
  EXPECT_TRUE(rep.mentions("capacity"));
  inst.n = 2;
  EXPECT_TRUE(validate_instance(inst).mentions("column count"));
}

TEST(Sparsity, EmptyColumns) {
  const auto inst = PackingInstance::with_unit_capacities(3, {{}, {}}, {1.0, 1.0});
  EXPECT_EQ(column_sparsity(inst), 0u);
}

TEST(Sparsity, GapInstance) {
  EXPECT_EQ(column_sparsity(gen_gap_instance(5, 1e-4)), 5u);
}

TEST(Sparsity, RandomInstanceRespectsDeclaredK) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = gen_random_kcs(15, 12, 3, seed);
    std::size_t direct = 0;
    for (const auto& col : inst.columns) direct = std::max(direct, col.size());
    EXPECT_EQ(column_sparsity(inst), direct);
    EXPECT_LE(direct, 3u);
  }
}

TEST(Feasible, EmptySet) {
  EXPECT_TRUE(check_feasible(gen_gap_instance(3, 1e-4), ItemSet{}));
}

TEST(Feasible, GapPairOverflows) {
  EXPECT_FALSE(check_feasible(gen_gap_instance(3, 1e-4), ItemSet{0, 1}));
}

TEST(Feasible, ExactCapacity) {
  const auto inst = PackingInstance::with_unit_capacities(1, {{{0, 1.0}}}, {1.0});
  EXPECT_TRUE(check_feasible(inst, ItemSet{0}));
}

TEST(Feasible, ToleranceIsOneInABillion) {
  auto inst = PackingInstance::with_unit_capacities(1, {{{0, 0.5}}, {{0, 0.5 + 5e-10}}}, {1, 1});
  EXPECT_TRUE(check_feasible(inst, ItemSet{0, 1}));
  inst.columns[1][0].coeff = 0.5 + 5e-9;
  EXPECT_FALSE(check_feasible(inst, ItemSet{0, 1}));
}

TEST(Feasible, MatchesRowUsage) {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = test::random_instance(8, 5, 3, rng, 0.6);
    std::vector<std::size_t> pick;
    for (std::size_t j = 0; j < inst.n; ++j) {
      if (rng.bernoulli(0.5)) pick.push_back(j);
    }
    const ItemSet s(pick);
    const auto usage = row_usage(inst, s);
    const bool direct = std::all_of(usage.begin(), usage.end(), [](double u) { return u <= 1.0 + 1e-9; });
    EXPECT_EQ(check_feasible(inst, s), direct);
  }
}

TEST(Objective, LengthMismatchThrows) {
  const auto inst = PackingInstance::with_unit_capacities(1, {{{0, 1.0}}}, {2.0});
  const std::vector<double> x{0.5};
  EXPECT_DOUBLE_EQ(objective_value(inst, x), 1.0);
  const std::vector<double> bad{0.5, 0.5};
  EXPECT_THROW(objective_value(inst, bad), ValidationError);
}

TEST(Capacities, Integrality) {
  auto inst = PackingInstance::with_unit_capacities(2, {}, {});
  EXPECT_TRUE(has_integral_capacities(inst));
  inst.capacities[1] = 2.5;
  EXPECT_FALSE(has_integral_capacities(inst));
}

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "colsparse/errors.hpp"
#include "colsparse/harness.hpp"
#include "colsparse/lp.hpp"
#include "support.hpp"

using namespace colsparse;

namespace {

// Best objective over all basic feasible solutions: pick num_vars tight constraints
// out of rows, x >= 0 and x <= 1, solve the square system, keep feasible points.
double vertex_enumeration(const LpModel& model) {
  const std::size_t n = model.num_vars;
  struct Halfspace {
    std::vector<double> a;
    double b;
  };
  std::vector<Halfspace> hs;
  for (const auto& row : model.rows) {
    Halfspace h{std::vector<double>(n, 0.0), row.upper};
    for (auto [v, c] : row.coeffs) h.a[v] += c;
    hs.push_back(h);
  }
  for (std::size_t v = 0; v < n; ++v) {
    Halfspace lo{std::vector<double>(n, 0.0), 0.0};
    lo.a[v] = -1.0;
    hs.push_back(lo);
    Halfspace hi{std::vector<double>(n, 0.0), 1.0};
    hi.a[v] = 1.0;
    hs.push_back(hi);
  }
  double best = -1.0;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a[r][c] = hs[pick[r]].a[c];
        a[r][n] = hs[pick[r]].b;
      }
      for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
          if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        }
        if (std::abs(a[p][c]) < 1e-12) return;
        std::swap(a[p], a[c]);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == c) continue;
          const double f = a[r][c] / a[c][c];
          for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
      }
      std::vector<double> x(n);
      for (std::size_t c = 0; c < n; ++c) x[c] = a[c][n] / a[c][c];
      for (const auto& h : hs) {
        double lhs = 0.0;
        for (std::size_t c = 0; c < n; ++c) lhs += h.a[c] * x[c];
        if (lhs > h.b + 1e-9) return;
      }
      double obj = 0.0;
      for (std::size_t c = 0; c < n; ++c) obj += model.objective[c] * x[c];
      best = std::max(best, obj);
      return;
    }
    for (std::size_t i = start; i < hs.size(); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST(BigSets, StrictThreshold) {
  const auto inst =
      PackingInstance::with_unit_capacities(1, {{{0, 0.6}}, {{0, 0.5}}, {{0, 0.1}}}, {1, 1, 1});
  const auto big = big_sets(inst);
  ASSERT_EQ(big.size(), 1u);
  EXPECT_EQ(big[0], (ItemSet{0}));
}

TEST(BigSets, GapDiagonal) {
  const auto inst = gen_gap_instance(4, 1e-4);
  const auto big = big_sets(inst);
  for (std::size_t i = 0; i < inst.m; ++i) EXPECT_EQ(big[i], (ItemSet{i}));
}

TEST(BigSets, AllTiny) {
  const auto inst =
      PackingInstance::with_unit_capacities(2, {{{0, 0.1}, {1, 0.2}}, {{1, 0.3}}}, {1, 1});
  for (const auto& s : big_sets(inst)) EXPECT_TRUE(s.empty());
}

TEST(BigSets, RelativeToCapacity) {
  auto inst = PackingInstance::with_unit_capacities(1, {{{0, 0.8}}, {{0, 0.9}}}, {1, 1});
  inst.capacities[0] = 2.0;
  EXPECT_TRUE(big_sets(inst)[0].empty());
}

TEST(BuildLp, StrengtheningOnlyForSharedBigRows) {
  const auto inst = PackingInstance::with_unit_capacities(
      2, {{{0, 0.6}, {1, 0.7}}, {{0, 0.9}}, {{1, 0.2}}}, {1, 1, 1});
  EXPECT_EQ(build_packing_lp(inst, false).rows.size(), 2u);
  // Row 0 has two big items, row 1 only one.
  EXPECT_EQ(build_packing_lp(inst, true).rows.size(), 3u);
}

TEST(SolveLp, SingleItem) {
  const auto inst = PackingInstance::with_unit_capacities(1, {{{0, 1.0}}}, {1.0});
  const auto sol = solve_packing_lp(inst, true);
  ASSERT_EQ(sol.x.size(), 1u);
  EXPECT_NEAR(sol.x[0], 1.0, 1e-12);
  EXPECT_NEAR(sol.objective, 1.0, 1e-12);
}

TEST(SolveLp, GapInstanceValue) {
  const std::size_t k = 3;
  const double eps = 1e-6;
  const auto inst = gen_gap_instance(k, eps);
  const auto sol = solve_packing_lp(inst, true);
  EXPECT_GE(sol.objective, (2.0 * k - 1.0) * (1.0 - k * eps) - 1e-9);
  EXPECT_LE(max_violation(build_packing_lp(inst, true), sol.x), 1e-9);
}

TEST(SolveLp, MatchesVertexEnumeration) {
  Rng rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const auto inst = test::random_instance(4, 3, 3, rng);
    for (bool strengthen : {false, true}) {
      const LpModel model = build_packing_lp(inst, strengthen);
      const auto sol = solve_lp(model);
      EXPECT_LE(max_violation(model, sol.x), 1e-9);
      EXPECT_NEAR(sol.objective, vertex_enumeration(model), 1e-9) << "rep " << rep;
    }
  }
}

TEST(SolveLp, RandomModelsMatchVertexEnumeration) {
  Rng rng(77);
  for (int rep = 0; rep < 40; ++rep) {
    LpModel model;
    model.num_vars = 4;
    for (int v = 0; v < 4; ++v) model.objective.push_back(rng.uniform() * 2.0 - 0.5);
    for (int r = 0; r < 4; ++r) {
      LpRow row;
      for (std::size_t v = 0; v < 4; ++v) {
        if (rng.bernoulli(0.6)) row.coeffs.push_back({v, rng.uniform()});
      }
      row.upper = rng.uniform() * 1.5;
      model.rows.push_back(row);
    }
    const auto sol = solve_lp(model);
    EXPECT_LE(max_violation(model, sol.x), 1e-9);
    EXPECT_NEAR(sol.objective, std::max(0.0, vertex_enumeration(model)), 1e-9) << "rep " << rep;
  }
}

TEST(SolveLp, DegenerateTiesAreDeterministic) {
  // Many equal columns force degenerate pivots.
  std::vector<std::vector<Entry>> cols(6, std::vector<Entry>{{0, 0.5}, {1, 0.5}});
  const auto inst = PackingInstance::with_unit_capacities(2, cols, std::vector<double>(6, 1.0));
  const auto a = solve_packing_lp(inst, true);
  const auto b = solve_packing_lp(inst, true);
  EXPECT_EQ(a.x, b.x);
  EXPECT_NEAR(a.objective, 2.0, 1e-9);
}

TEST(SolveLp, MediumSizedFeasible) {
  const auto inst = gen_random_kcs(60, 40, 4, 5);
  const auto sol = solve_packing_lp(inst, true);
  EXPECT_LE(max_violation(build_packing_lp(inst, true), sol.x), 1e-9);
  EXPECT_GT(sol.objective, 0.0);
}

TEST(SolveLp, RejectsNegativeUpperBound) {
  LpModel model;
  model.num_vars = 1;
  model.objective = {1.0};
  model.rows.push_back({{{0, 1.0}}, -1.0});
  EXPECT_THROW(solve_lp(model), ValidationError);
}

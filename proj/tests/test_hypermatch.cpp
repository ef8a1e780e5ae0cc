#include <gtest/gtest.h>

#include <cmath>

#include "colsparse/errors.hpp"
#include "colsparse/harness.hpp"
#include "colsparse/hypermatch.hpp"
#include "support.hpp"

using namespace colsparse;

namespace {

// Pr[center edge matched] on the star: it must be marked and precede every marked
// neighbour, i.e. g(x_e) * integral_0^1 (1 - g(x_f) u)^(k_e N) du. Simpson's rule.
double star_oracle(std::size_t k_e, double x_e, std::size_t per_vertex) {
  const double gf = attenuation_g((1.0 - x_e) / static_cast<double>(per_vertex));
  const double power = static_cast<double>(k_e * per_vertex);
  const int steps = 20000;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double u = static_cast<double>(i) / steps;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(1.0 - gf * u, power);
  }
  return attenuation_g(x_e) * acc / (3.0 * steps);
}

Hypergraph single_edge() { return Hypergraph{3, {{{0, 1, 2}, 1.0}}}; }

}  // namespace

TEST(Attenuation, Values) {
  EXPECT_DOUBLE_EQ(attenuation_g(0.0), 0.0);
  EXPECT_DOUBLE_EQ(attenuation_g(1.0), 0.5);
  EXPECT_DOUBLE_EQ(attenuation_g(0.5), 0.375);
  EXPECT_THROW(attenuation_g(1.5), DomainError);
  EXPECT_THROW(attenuation_g(-0.1), DomainError);
}

TEST(Bound, Values) {
  EXPECT_NEAR(theoretical_bound(1), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(theoretical_bound(1), 0.63212, 1e-5);
  const double b10 = theoretical_bound(10) * 10.0;
  EXPECT_GT(b10, 0.99);
  EXPECT_LE(b10, 1.0);
  for (std::size_t k = 1; k < 30; ++k) {
    EXPECT_LT(theoretical_bound(k) * k, theoretical_bound(k + 1) * (k + 1));
  }
  EXPECT_THROW(theoretical_bound(0), DomainError);
  EXPECT_NEAR(linear_bound(2, 1.0), 1.0 / 3.0, 1e-15);
}

TEST(Validate, Hypergraph) {
  EXPECT_TRUE(validate_hypergraph(single_edge()).ok());
  EXPECT_TRUE(validate_hypergraph(Hypergraph{2, {{{0, 0}, 1.0}}}).mentions("repeated"));
  EXPECT_TRUE(validate_hypergraph(Hypergraph{2, {{{0, 2}, 1.0}}}).mentions("out of range"));
  EXPECT_TRUE(validate_hypergraph(Hypergraph{2, {{{}, 1.0}}}).mentions("no vertices"));
}

TEST(Matching, SingleEdgeRate) {
  const auto h = single_edge();
  const MatchingRounder r(h, {1.0}, attenuation_g);
  Rng rng(1);
  const std::uint64_t n = 1000000;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < n; ++t) hits += r.round(rng).size();
  EXPECT_TRUE(test::within_sigma(static_cast<double>(hits) / n, 0.5, n, 3.0));
}

TEST(Matching, EarlierKeyWins) {
  // Both edges always marked: exactly one is matched, each half the time.
  const Hypergraph h{3, {{{0, 1}, 1.0}, {{1, 2}, 1.0}}};
  const MatchingRounder r(h, {1.0, 1.0}, [](double) { return 1.0; });
  Rng rng(2);
  const std::uint64_t n = 100000;
  std::uint64_t first = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    const ItemSet m = r.round(rng);
    ASSERT_EQ(m.size(), 1u);
    first += m.contains(0);
  }
  EXPECT_TRUE(test::within_sigma(static_cast<double>(first) / n, 0.5, n, 4.0));
}

TEST(Matching, AlwaysDisjoint) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto h = gen_random_hypergraph(15, 30, 4, seed);
    std::vector<double> x(h.n(), 0.9);
    const MatchingRounder r(h, x, attenuation_g);
    Rng rng(seed);
    for (int t = 0; t < 2000; ++t) ASSERT_TRUE(is_matching(h, r.round(rng)));
  }
}

TEST(Matching, IsMatchingDetectsOverlap) {
  const Hypergraph h{3, {{{0, 1}, 1.0}, {{1, 2}, 1.0}}};
  EXPECT_FALSE(is_matching(h, ItemSet{0, 1}));
  EXPECT_TRUE(is_matching(h, ItemSet{1}));
}

TEST(Matching, StarMatchesQuadrature) {
  for (std::size_t k_e : {2u, 3u}) {
    const auto star = gen_star_instance(k_e, 0.01, 100);
    const MatchingRounder r(star.graph, star.x, attenuation_g);
    const double exact = star_oracle(k_e, 0.01, 100);
    Rng rng(3 + k_e);
    const std::uint64_t n = 300000;
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < n; ++t) hits += r.round(rng).contains(0);
    const double freq = static_cast<double>(hits) / n;
    EXPECT_TRUE(test::within_sigma(freq, exact, n, 4.0)) << freq << " vs " << exact;
    EXPECT_GE(exact / 0.01, theoretical_bound(k_e));
  }
}

TEST(Matching, StarOracleAboveBound) {
  for (std::size_t k_e : {2u, 3u, 5u, 10u}) {
    EXPECT_GE(star_oracle(k_e, 0.01, 100) / 0.01, theoretical_bound(k_e)) << k_e;
  }
}

// The bound needs k_e >= 2: for a single-vertex edge the worst case sits at x -> 1,
// where the edge is matched with probability g(1)/1 = 1/2 < 1 - 1/e.
TEST(Matching, SingleVertexEdgesFallBelowBound) {
  EXPECT_LT(star_oracle(1, 0.01, 100) / 0.01, theoretical_bound(1));
  const Hypergraph lone{1, {{{0}, 1.0}}};
  const MatchingRounder r(lone, {1.0}, attenuation_g);
  Rng rng(8);
  const std::uint64_t n = 200000;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < n; ++t) hits += r.round(rng).size();
  const double p = static_cast<double>(hits) / n;
  EXPECT_TRUE(test::within_sigma(p, 0.5, n, 4.0));
  EXPECT_LT(p, theoretical_bound(1));
}

TEST(Linear, ZeroAlphaEmpty) {
  const auto h = gen_random_hypergraph(10, 20, 3, 1);
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    EXPECT_TRUE(round_matching_linear(h, {std::vector<double>(20, 0.7), 0.0}, 0.0, rng).empty());
  }
}

TEST(Linear, SingleEdgeAlwaysMatched) {
  const auto h = single_edge();
  Rng rng(5);
  for (int t = 0; t < 100; ++t) EXPECT_EQ(round_matching_linear(h, {{1.0}, 0.0}, 1.0, rng).size(), 1u);
}

TEST(Linear, StarAboveClosedForm) {
  const auto star = gen_star_instance(2, 0.01, 100);
  Rng rng(6);
  const std::uint64_t n = 300000;
  std::uint64_t hits = 0;
  const FractionalSolution x{star.x, 0.0};
  for (std::uint64_t t = 0; t < n; ++t) hits += round_matching_linear(star.graph, x, 1.0, rng).contains(0);
  const double p = static_cast<double>(hits) / n;
  EXPECT_GE(p / 0.01, linear_bound(2, 1.0) - 3.0 * test::sigma(p, n) / 0.01);
}

TEST(Linear, BadAlpha) {
  Rng rng(7);
  EXPECT_THROW(round_matching_linear(single_edge(), {{1.0}, 0.0}, 1.5, rng), ParamError);
}

TEST(Packing, Conversion) {
  const auto inst = to_packing_instance(Hypergraph{3, {{{0, 2}, 2.0}}});
  EXPECT_EQ(inst.m, 3u);
  EXPECT_EQ(inst.columns[0].size(), 2u);
  EXPECT_EQ(inst.weights[0], 2.0);
  EXPECT_TRUE(validate_instance(inst).ok());
}

#include <gtest/gtest.h>

#include <cmath>

#include "colsparse/errors.hpp"
#include "colsparse/montecarlo.hpp"

using namespace colsparse;

TEST(RequiredSamples, UnitCase) {
  EXPECT_EQ(required_samples({1.0, 1.0, std::exp(-1.0)}), 3u);
}

TEST(RequiredSamples, WorkedValue) {
  // ceil(3 ln 100 / (0.5 * 0.01)) = ceil(2763.1...)
  EXPECT_EQ(required_samples({0.5, 0.1, 0.01}), 2764u);
}

TEST(RequiredSamples, HalvingCDoubles) {
  const auto a = required_samples({0.4, 0.05, 1e-3});
  const auto b = required_samples({0.2, 0.05, 1e-3});
  EXPECT_NEAR(static_cast<double>(b), 2.0 * static_cast<double>(a), 1.0);
}

TEST(RequiredSamples, Validation) {
  EXPECT_THROW(required_samples({0.0, 0.1, 0.1}), ValidationError);
  EXPECT_THROW(required_samples({0.5, 0.0, 0.1}), ValidationError);
  EXPECT_THROW(required_samples({0.5, 0.1, 1.0}), ValidationError);
  EXPECT_THROW(required_samples({1.5, 0.1, 0.1}), ValidationError);
}

TEST(EstimateEvent, Constant) {
  Rng rng(1);
  EXPECT_EQ(estimate_event([](Rng&) { return true; }, 1000, rng), 1.0);
  EXPECT_EQ(estimate_event([](Rng&) { return false; }, 1000, rng), 0.0);
}

TEST(EstimateEvent, FairCoin) {
  Rng rng(2);
  const std::uint64_t n = 1000000;
  const double f = estimate_event([](Rng& r) { return r.bernoulli(0.5); }, n, rng);
  EXPECT_NEAR(f, 0.5, 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST(EstimateEvent, Reproducible) {
  Rng a(3), b(3);
  auto coin = [](Rng& r) { return r.bernoulli(0.3); };
  EXPECT_EQ(estimate_event(coin, 5000, a), estimate_event(coin, 5000, b));
}

TEST(EstimateEvent, WithinRelativeErrorAtPrescribedSize) {
  // With the prescribed sample count the relative error exceeds epsilon rarely;
  // across 40 seeds at delta = 0.01 at most a couple may miss.
  const EstimationSpec spec{0.2, 0.05, 0.01};
  const auto n = required_samples(spec);
  int misses = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    Rng rng(100 + s);
    const double f = estimate_event([](Rng& r) { return r.bernoulli(0.25); }, n, rng);
    misses += std::abs(f - 0.25) > spec.epsilon * 0.25;
  }
  EXPECT_LE(misses, 2);
}

TEST(KeepProb, Ratio) {
  const auto k = attenuation_keep_prob(0.8, 0.5);
  EXPECT_DOUBLE_EQ(k.probability, 0.625);
  EXPECT_FALSE(k.underflow);
}

TEST(KeepProb, Identity) {
  const auto k = attenuation_keep_prob(0.5, 0.5);
  EXPECT_DOUBLE_EQ(k.probability, 1.0);
  EXPECT_FALSE(k.underflow);
}

TEST(KeepProb, Clamp) {
  const auto k = attenuation_keep_prob(0.4, 0.5);
  EXPECT_DOUBLE_EQ(k.probability, 1.0);
  EXPECT_TRUE(k.underflow);
}

TEST(KeepProb, ZeroEstimate) {
  EXPECT_THROW(attenuation_keep_prob(0.0, 0.5), DomainError);
}

TEST(Summaries, MeanAndStdError) {
  const auto m = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-12);
  EXPECT_EQ(m.samples, 4u);
  EXPECT_NEAR(binomial_stderr(0.5, 100), 0.05, 1e-15);
}

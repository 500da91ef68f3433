#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "mmsbayes/conjugate.hpp"
#include "mmsbayes/error.hpp"
#include "oracles.hpp"

using namespace mmsbayes;
using boost::multiprecision::cpp_rational;

TEST(BetaBinomial, ClassFixture) {
  const auto post = update_beta_binomial(BetaParams(2, 9), 25, 100);
  EXPECT_EQ(post.params, BetaParams(27, 84));
  EXPECT_EQ(post.prior, BetaParams(2, 9));
  EXPECT_EQ(post.data, CountVector::binary(25, 100));

  const auto s = summarize_beta(post.params);
  const cpp_rational mean(27, 111);
  const cpp_rational mode(26, 109);
  const cpp_rational var = cpp_rational(27 * 84) / cpp_rational(111 * 111 * 112);
  EXPECT_NEAR(s.mean, static_cast<double>(mean), 1e-15);
  ASSERT_TRUE(s.mode.has_value());
  EXPECT_NEAR(*s.mode, static_cast<double>(mode), 1e-15);
  EXPECT_NEAR(s.variance, static_cast<double>(var), 1e-17);

  const auto [lo, hi] = oracle::tabulated_interval(27, 84, 0.95);
  EXPECT_NEAR(s.interval.lower, lo, 1e-7);
  EXPECT_NEAR(s.interval.upper, hi, 1e-7);
  EXPECT_EQ(s.interval.level, 0.95);
}

TEST(BetaBinomial, FlatPriorNoData) {
  const auto post = update_beta_binomial(BetaParams(1, 1), 0, 0);
  EXPECT_EQ(post.params, BetaParams(1, 1));
  const auto s = summarize_beta(post.params);
  EXPECT_FALSE(s.mode.has_value());
  EXPECT_NEAR(s.interval.lower, 0.025, 1e-12);
  EXPECT_NEAR(s.interval.upper, 0.975, 1e-12);
}

TEST(BetaBinomial, RejectsNonBinaryData) {
  EXPECT_THROW(update_beta_binomial(BetaParams(1, 1), CountVector({1, 2, 3})), DomainError);
  EXPECT_THROW(update_beta_binomial(BetaParams(1, 1), 5, 4), DomainError);
}

TEST(BetaBinomial, BatchEqualsSequentialBitExact) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const BetaParams prior(1 + rng.next_u64() % 10, 1 + rng.next_u64() % 10);
    CountVector pooled = CountVector::zeros(2);
    BetaPosterior seq = update_beta_binomial(prior, CountVector::zeros(2));
    for (int b = 0; b < 8; ++b) {
      const std::uint64_t n = rng.next_u64() % 60;
      const std::uint64_t y = n ? rng.next_u64() % (n + 1) : 0;
      const auto bag = CountVector::binary(y, n);
      pooled += bag;
      seq = update_beta_binomial(seq, bag);
    }
    const auto batch = update_beta_binomial(prior, pooled);
    EXPECT_EQ(batch.params, seq.params);
    EXPECT_EQ(batch.data, seq.data);
  }
}

TEST(DirichletMultinomial, AddsCountsAndReducesToBeta) {
  const auto d = update_dirichlet_multinomial(DirichletParams({1, 2, 3}), CountVector({4, 0, 7}));
  EXPECT_EQ(d.concentration(), (std::vector<double>{5, 2, 10}));
  const auto two = update_dirichlet_multinomial(DirichletParams({2, 9}), CountVector({25, 75}));
  const auto beta = update_beta_binomial(BetaParams(2, 9), 25, 100).params;
  EXPECT_EQ(two[0], beta.alpha());
  EXPECT_EQ(two[1], beta.beta());
  EXPECT_THROW(update_dirichlet_multinomial(DirichletParams({1, 1}), CountVector({1, 2, 3})),
               DomainError);
}

TEST(Summary, EqualTailedIntervalOracle) {
  for (auto [a, b] : std::vector<std::pair<double, double>>{{3, 7}, {2, 9}, {40, 12}}) {
    for (double level : {0.5, 0.9, 0.99}) {
      const auto s = summarize_beta(BetaParams(a, b), level);
      const auto [lo, hi] = oracle::tabulated_interval(a, b, level);
      EXPECT_NEAR(s.interval.lower, lo, 1e-7);
      EXPECT_NEAR(s.interval.upper, hi, 1e-7);
    }
  }
  EXPECT_THROW(summarize_beta(BetaParams(2, 3), 1.0), DomainError);
  EXPECT_THROW(summarize_beta(BetaParams(2, 3), 0.0), DomainError);
}

TEST(Summary, HpdIsShortestWithEqualDensities) {
  const BetaParams p(27, 84);
  const auto hpd = hpd_interval(p, 0.95);
  const auto et = summarize_beta(p, 0.95).interval;
  EXPECT_NEAR(boost::math::ibeta(27.0, 84.0, hpd.upper) - boost::math::ibeta(27.0, 84.0, hpd.lower),
              0.95, 1e-9);
  EXPECT_LE(hpd.upper - hpd.lower, et.upper - et.lower);
  EXPECT_NEAR(beta_log_pdf(Probability(hpd.lower), p), beta_log_pdf(Probability(hpd.upper), p),
              1e-5);
}

TEST(DensityGrid, OpenIntervalAndArgmax) {
  const auto g = density_grid(BetaParams(27, 84), 512);
  ASSERT_EQ(g.theta.size(), 512u);
  EXPECT_GT(g.theta.front(), 0.0);
  EXPECT_LT(g.theta.back(), 1.0);
  for (std::size_t i = 1; i < g.theta.size(); ++i) ASSERT_LT(g.theta[i - 1], g.theta[i]);
  const auto best = std::max_element(g.density.begin(), g.density.end()) - g.density.begin();
  EXPECT_LE(std::abs(g.theta[best] - 26.0 / 109.0), 1.0 / 513.0);
  EXPECT_THROW(density_grid(BetaParams(1, 1), 1), DomainError);
  const auto flat = density_grid(BetaParams(1, 1), 16);
  for (double d : flat.density) EXPECT_DOUBLE_EQ(d, 1.0);
}

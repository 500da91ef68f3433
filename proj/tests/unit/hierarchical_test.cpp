#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "mmsbayes/error.hpp"
#include "mmsbayes/hierarchical.hpp"
#include "oracles.hpp"

using namespace mmsbayes;

namespace {

std::vector<Simplex> profiles() {
  return {Simplex({0.25, 0.25, 0.125, 0.125, 0.125, 0.125}),
          Simplex({0.207, 0.205, 0.198, 0.135, 0.131, 0.124})};
}

HierarchicalPriors flat(std::size_t k) {
  return {DirichletParams::symmetric(2, 1.0), DirichletParams::symmetric(k, 1.0)};
}

double max_abs_diff(const MixturePosteriorSummary& a, const MixturePosteriorSummary& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.assignment_probs.size(); ++i) {
    for (std::size_t f = 0; f < a.assignment_probs[i].size(); ++f) {
      worst = std::max(worst, std::abs(a.assignment_probs[i][f] - b.assignment_probs[i][f]));
    }
  }
  for (std::size_t f = 0; f < a.beta_means.size(); ++f) {
    for (std::size_t k = 0; k < a.beta_means[f].size(); ++k) {
      worst = std::max(worst, std::abs(a.beta_means[f][k] - b.beta_means[f][k]));
    }
  }
  return worst;
}

}  // namespace

TEST(Simulate, ShapesAndDeterminism) {
  Rng a(1), b(1);
  const std::vector<std::uint64_t> sizes{10, 20, 30};
  const auto s1 = simulate_bags(Simplex({0.6, 0.4}), profiles(), sizes, a);
  const auto s2 = simulate_bags(Simplex({0.6, 0.4}), profiles(), sizes, b);
  ASSERT_EQ(s1.bags.size(), 3u);
  EXPECT_EQ(s1.bags, s2.bags);
  EXPECT_EQ(s1.z, s2.z);
  EXPECT_EQ(s1.bags[0].bag_id, "bag-001");
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s1.bags[i].total(), sizes[i]);
}

TEST(AssignmentProbabilities, MatchesFullLikelihood) {
  const CountVector c({6, 3, 2, 4, 1, 3});
  const Simplex theta({0.7, 0.3});
  const auto beta = profiles();
  const auto got = assignment_probabilities(c, theta, beta);
  const double l0 = std::log(0.7) + multinomial_log_pmf(c, beta[0]);
  const double l1 = std::log(0.3) + multinomial_log_pmf(c, beta[1]);
  const double p0 = 1 / (1 + std::exp(l1 - l0));
  EXPECT_NEAR(got[0], p0, 1e-13);
  EXPECT_NEAR(got[1], 1 - p0, 1e-13);
}

TEST(Canonicalize, SortsByBlueAndIsIdempotent) {
  MixtureState s{{0, 1, 1}, Simplex({0.3, 0.7}),
                 {Simplex({0.1, 0.9}), Simplex({0.6, 0.4})}};
  const auto c = canonicalize_labels(s);
  EXPECT_EQ(c.z, (std::vector<std::size_t>{1, 0, 0}));
  EXPECT_EQ(c.theta, Simplex({0.7, 0.3}));
  EXPECT_EQ(c.beta[0], Simplex({0.6, 0.4}));
  EXPECT_EQ(canonicalize_labels(c), c);
}

TEST(Exact, NoBagsGivesPriorMeans) {
  const HierarchicalPriors priors{DirichletParams({2.0, 1.0}), DirichletParams({1.0, 3.0})};
  const auto e = exact_posterior({}, priors);
  EXPECT_TRUE(e.assignment_probs.empty());
  EXPECT_NEAR(e.theta_mean[0], 2.0 / 3.0, 1e-14);
  for (int f = 0; f < 2; ++f) EXPECT_NEAR(e.beta_means[f][0], 0.25, 1e-14);
}

TEST(Exact, OneBagFollowsMixturePrior) {
  const HierarchicalPriors priors{DirichletParams({2.0, 1.0}), DirichletParams({1.0, 1.0})};
  const std::vector<BagTally> bags{{"b", CountVector::binary(7, 10), std::nullopt}};
  const auto e = exact_posterior(bags, priors);
  EXPECT_NEAR(e.assignment_probs[0][0], 2.0 / 3.0, 1e-13);
}

TEST(Exact, MatchesDirectIntegration) {
  const std::vector<std::pair<unsigned, unsigned>> yn{{2, 9}, {7, 10}, {1, 6}, {5, 5}};
  std::vector<BagTally> bags;
  for (std::size_t i = 0; i < yn.size(); ++i) {
    bags.push_back({"b" + std::to_string(i), CountVector::binary(yn[i].first, yn[i].second),
                    std::nullopt});
  }
  const HierarchicalPriors priors{DirichletParams({1.5, 0.8}), DirichletParams({1.2, 2.0})};
  const auto e = exact_posterior(bags, priors);
  const auto ref = oracle::integrate_two_factory(yn, 1.5, 0.8, 1.2, 2.0);
  for (std::size_t b = 0; b < yn.size(); ++b) {
    EXPECT_NEAR(e.assignment_probs[b][0], ref.p_first[b], 1e-9);
  }
  EXPECT_NEAR(e.beta_means[0][0], ref.blue0, 1e-9);
  EXPECT_NEAR(e.beta_means[1][0], ref.blue1, 1e-9);
}

TEST(Exact, ExchangeableInBags) {
  Rng rng(4);
  const auto sim = simulate_bags(Simplex({0.5, 0.5}), profiles(), {12, 15, 9, 20, 11}, rng);
  const auto priors = flat(6);
  const auto e = exact_posterior(sim.bags, priors, Labeling::canonical);
  std::vector<std::size_t> order{3, 0, 4, 1, 2};
  std::vector<BagTally> permuted;
  for (auto i : order) permuted.push_back(sim.bags[i]);
  const auto p = exact_posterior(permuted, priors, Labeling::canonical);
  for (std::size_t j = 0; j < order.size(); ++j) {
    EXPECT_NEAR(p.assignment_probs[j][0], e.assignment_probs[order[j]][0], 1e-12);
  }
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(p.beta_means[0][k], e.beta_means[0][k], 1e-12);
}

TEST(Exact, Preconditions) {
  const HierarchicalPriors three{DirichletParams::symmetric(3, 1.0),
                                 DirichletParams::symmetric(2, 1.0)};
  EXPECT_THROW(exact_posterior({}, three), DomainError);
  std::vector<BagTally> many;
  for (int i = 0; i < 13; ++i) {
    many.push_back({"b" + std::to_string(i), CountVector::binary(1, 2), std::nullopt});
  }
  EXPECT_THROW(exact_posterior(many, flat(2)), DomainError);
}

TEST(Gibbs, AgreesWithExactEnumeration) {
  Rng rng(8);
  const auto sim = simulate_bags(Simplex({0.5, 0.5}), profiles(), {40, 40, 40, 40, 40}, rng);
  const auto priors = flat(6);
  const auto chain = run_chain(sim.bags, priors, ChainConfig{22000, 2000, 1, 77});
  EXPECT_EQ(chain.states.size(), 20000u);
  const double d = max_abs_diff(summarize_chain(chain),
                                exact_posterior(sim.bags, priors, Labeling::canonical));
  EXPECT_LE(d, 0.02);
}

TEST(Gibbs, DeterministicAndThinned) {
  Rng rng(2);
  const auto sim = simulate_bags(Simplex({0.5, 0.5}), profiles(), {30, 30, 30}, rng);
  const ChainConfig config{500, 100, 4, 9};
  const auto a = run_chain(sim.bags, flat(6), config);
  const auto b = run_chain(sim.bags, flat(6), config);
  ASSERT_EQ(a.states.size(), 100u);
  EXPECT_EQ(a.states, b.states);
  for (const auto& s : a.states) {
    EXPECT_GE(s.beta[0][kRelabelCategory], s.beta[1][kRelabelCategory]);
  }
  const auto chains = run_chains(sim.bags, flat(6), config, 3);
  ASSERT_EQ(chains.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    ChainConfig own = config;
    own.seed = derive_seed(config.seed, c);
    EXPECT_EQ(chains[c].states, run_chain(sim.bags, flat(6), own).states);
  }
}

TEST(Gibbs, EmptyFactoryDrawsFromPrior) {
  const std::vector<BagTally> bags{{"b", CountVector({3, 1}), std::nullopt}};
  const HierarchicalPriors priors{DirichletParams::symmetric(2, 1.0),
                                  DirichletParams({2.0, 6.0})};
  Rng rng(12);
  MixtureState s{{0}, Simplex({0.5, 0.5}), {Simplex({0.5, 0.5}), Simplex({0.5, 0.5})}};
  double sum = 0;
  int empty = 0;
  for (int i = 0; i < 40000; ++i) {
    s = gibbs_step(std::move(s), bags, priors, rng);
    const std::size_t other = 1 - s.z[0];
    sum += s.beta[other][0];
    ++empty;
  }
  const double var = 0.25 * 0.75 / 9.0;
  EXPECT_NEAR(sum / empty, 0.25, 4 * std::sqrt(var / empty));
}

TEST(DirichletMultinomialMarginal, TwoCategoryClosedForm) {
  const double got = dirichlet_multinomial_log_marginal(CountVector({3, 2}), DirichletParams({1, 1}));
  EXPECT_NEAR(got, std::log(1.0 / 60.0), 1e-13);
}

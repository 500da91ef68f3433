#pragma once

#include <cstdint>
#include <vector>

#include "mmsbayes/distributions.hpp"
#include "mmsbayes/rng.hpp"
#include "mmsbayes/tally.hpp"

namespace mmsbayes {

// Two-level categorical mixture over bags:
//
//   theta   ~ Dirichlet(alpha)          mixture weights over F factories
//   beta_f  ~ Dirichlet(eta)            colour distribution of factory f
//   z_b     ~ Categorical(theta)        factory of bag b
//   c_b     ~ Multinomial(n_b, beta_zb) colour counts of bag b, n_b observed
//
// Factory indices are 0-based throughout.

struct HierarchicalPriors {
  DirichletParams alpha;  // size F
  DirichletParams eta;    // size K, shared by every factory

  std::size_t factories() const noexcept { return alpha.size(); }
  std::size_t categories() const noexcept { return eta.size(); }
};

struct MixtureState {
  std::vector<std::size_t> z;
  Simplex theta;
  std::vector<Simplex> beta;

  friend bool operator==(const MixtureState&, const MixtureState&) = default;
};

struct ChainConfig {
  std::uint64_t iterations = 10000;
  std::uint64_t burn_in = 2000;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
};

// Recorded states after burn-in and thinning, each canonically relabelled.
struct ChainOutput {
  std::vector<MixtureState> states;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thin = 1;
  std::uint64_t total_iterations = 0;
};

struct MixturePosteriorSummary {
  std::vector<std::vector<double>> assignment_probs;  // B x F
  Simplex theta_mean;
  std::vector<Simplex> beta_means;
};

struct SimulatedBags {
  std::vector<BagTally> bags;
  std::vector<std::size_t> z;
};

// Category whose proportion fixes the canonical factory order.
inline constexpr std::size_t kRelabelCategory = kBlue;

SimulatedBags simulate_bags(const Simplex& theta,
                            const std::vector<Simplex>& beta,
                            const std::vector<std::uint64_t>& bag_sizes,
                            Rng& rng);

// One systematic sweep: z_b | theta, beta for every bag, then
// theta | z ~ Dirichlet(alpha + assignment counts), then
// beta_f | z ~ Dirichlet(eta + pooled counts of the bags in f). A factory with
// no bags draws beta_f from the prior, which is its exact conditional.
MixtureState gibbs_step(MixtureState state, const std::vector<BagTally>& bags,
                        const HierarchicalPriors& priors, Rng& rng);

// Permutes factory labels so beta_f[kRelabelCategory] is non-increasing in f
// (stable for ties), carrying theta and z along. Idempotent.
MixtureState canonicalize_labels(MixtureState state);

// Conditional P(z_b = f | theta, beta) for one bag, normalized in log space.
std::vector<double> assignment_probabilities(const CountVector& counts,
                                             const Simplex& theta,
                                             const std::vector<Simplex>& beta);

// theta and beta start from prior draws; the first sweep draws z.
ChainOutput run_chain(const std::vector<BagTally>& bags,
                      const HierarchicalPriors& priors,
                      const ChainConfig& config);

// Runs `chains` chains, chain i seeded with derive_seed(config.seed, i), on
// separate threads.
std::vector<ChainOutput> run_chains(const std::vector<BagTally>& bags,
                                    const HierarchicalPriors& priors,
                                    const ChainConfig& config,
                                    std::size_t chains);

MixturePosteriorSummary summarize_chain(const ChainOutput& chain);
// Pools the recorded states of several chains.
MixturePosteriorSummary summarize_chains(const std::vector<ChainOutput>& chains);

inline constexpr std::size_t kExactMaxBags = 12;

enum class Labeling {
  // Raw label-indexed posterior marginals.
  raw,
  // Posterior functionals under the same blue-ordered relabelling the chain
  // applies to its recorded states; directly comparable with summarize_chain.
  // Given z, the probability that factory 0 keeps its label is
  // P(X0 >= X1) for the independent blue marginals X_f ~ Beta, evaluated by
  // tanh-sinh quadrature.
  canonical,
};

// Exact posterior by enumerating every z in {0,1}^B with theta and beta
// integrated out analytically (Dirichlet-multinomial marginals). Requires
// F = 2 and B <= kExactMaxBags.
MixturePosteriorSummary exact_posterior(const std::vector<BagTally>& bags,
                                        const HierarchicalPriors& priors,
                                        Labeling labeling = Labeling::raw);

// ln of the Dirichlet-multinomial sequence marginal:
// ln Gamma(A) - ln Gamma(A + n) + sum_k [ln Gamma(a_k + c_k) - ln Gamma(a_k)].
double dirichlet_multinomial_log_marginal(const CountVector& counts,
                                          const DirichletParams& params);

}  // namespace mmsbayes

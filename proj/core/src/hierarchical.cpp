#include "mmsbayes/hierarchical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <tuple>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mmsbayes/error.hpp"
#include "mmsbayes/special.hpp"

namespace mmsbayes {

namespace {

double xlogy(double c, double x) { return c == 0.0 ? 0.0 : c * std::log(x); }

void check_dimensions(const MixtureState& state,
                      const std::vector<BagTally>& bags,
                      const HierarchicalPriors& priors) {
  const std::size_t f = priors.factories();
  const std::size_t k = priors.categories();
  if (state.theta.size() != f || state.beta.size() != f) {
    throw DomainError("mixture state does not match the number of factories");
  }
  for (const auto& b : state.beta) {
    if (b.size() != k) {
      throw DomainError("factory colour distribution has the wrong dimension");
    }
  }
  for (const auto& bag : bags) {
    if (bag.counts.size() != k) {
      throw DomainError("bag '" + bag.bag_id + "' has " +
                        std::to_string(bag.counts.size()) +
                        " categories, priors expect " + std::to_string(k));
    }
  }
}

Simplex mean_of(const std::vector<const Simplex*>& items) {
  std::vector<double> acc(items.front()->size(), 0.0);
  for (const Simplex* s : items) {
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += (*s)[k];
  }
  return Simplex::normalized(std::move(acc));
}

// P(X0 >= X1) for independent X0 ~ Beta(a0, b0), X1 ~ Beta(a1, b1).
class OrderingProbability {
 public:
  double operator()(double a0, double b0, double a1, double b1) {
    const auto key = std::make_tuple(a0, b0, a1, b1);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const BetaParams p0(a0, b0);
    const double log_norm = log_beta_fn(a0, b0);
    const auto integrand = [&](double x) {
      if (!(x > 0.0 && x < 1.0)) return 0.0;
      const double log_pdf =
          (a0 - 1.0) * std::log(x) + (b0 - 1.0) * std::log1p(-x) - log_norm;
      return std::exp(log_pdf) * incomplete_beta_regularized(x, a1, b1);
    };
    const double value =
        std::clamp(integrator_.integrate(integrand, 0.0, 1.0, 1e-12), 0.0, 1.0);
    cache_.emplace(key, value);
    return value;
  }

 private:
  boost::math::quadrature::tanh_sinh<double> integrator_;
  std::map<std::tuple<double, double, double, double>, double> cache_;
};

}  // namespace

SimulatedBags simulate_bags(const Simplex& theta,
                            const std::vector<Simplex>& beta,
                            const std::vector<std::uint64_t>& bag_sizes,
                            Rng& rng) {
  if (beta.size() != theta.size()) {
    throw DomainError("simulate_bags: one colour distribution per factory");
  }
  for (const auto& b : beta) {
    if (b.size() != beta.front().size()) {
      throw DomainError("simulate_bags: colour distributions differ in size");
    }
  }
  SimulatedBags out;
  const std::size_t width =
      std::max<std::size_t>(3, std::to_string(bag_sizes.size()).size());
  for (std::size_t i = 0; i < bag_sizes.size(); ++i) {
    const std::size_t f = sample_categorical(theta, rng);
    std::string id = std::to_string(i + 1);
    id.insert(0, width - id.size(), '0');
    out.bags.push_back(BagTally{"bag-" + id,
                                sample_multinomial(bag_sizes[i], beta[f], rng),
                                std::nullopt});
    out.z.push_back(f);
  }
  return out;
}

std::vector<double> assignment_probabilities(const CountVector& counts,
                                             const Simplex& theta,
                                             const std::vector<Simplex>& beta) {
  // The multinomial coefficient is common to every factory and cancels.
  std::vector<double> log_weights(theta.size());
  for (std::size_t f = 0; f < theta.size(); ++f) {
    double lw = std::log(theta[f]);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      lw += xlogy(static_cast<double>(counts[k]), beta[f][k]);
    }
    log_weights[f] = std::isnan(lw) ? -HUGE_VAL : lw;
  }
  return normalize_log_weights(log_weights);
}

MixtureState gibbs_step(MixtureState state, const std::vector<BagTally>& bags,
                        const HierarchicalPriors& priors, Rng& rng) {
  check_dimensions(state, bags, priors);
  const std::size_t factories = priors.factories();
  const std::size_t categories = priors.categories();
  state.z.resize(bags.size(), 0);

  for (std::size_t b = 0; b < bags.size(); ++b) {
    const auto probs =
        assignment_probabilities(bags[b].counts, state.theta, state.beta);
    state.z[b] = sample_categorical(Simplex::normalized(probs), rng);
  }

  std::vector<double> alpha_post(priors.alpha.concentration());
  std::vector<std::vector<double>> eta_post(factories,
                                            priors.eta.concentration());
  for (std::size_t b = 0; b < bags.size(); ++b) {
    const std::size_t f = state.z[b];
    alpha_post[f] += 1.0;
    for (std::size_t k = 0; k < categories; ++k) {
      eta_post[f][k] += static_cast<double>(bags[b].counts[k]);
    }
  }
  state.theta = sample_dirichlet(DirichletParams(std::move(alpha_post)), rng);
  for (std::size_t f = 0; f < factories; ++f) {
    state.beta[f] = sample_dirichlet(DirichletParams(std::move(eta_post[f])), rng);
  }
  return state;
}

MixtureState canonicalize_labels(MixtureState state) {
  const std::size_t factories = state.beta.size();
  std::vector<std::size_t> order(factories);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t lhs, std::size_t rhs) {
                     return state.beta[lhs][kRelabelCategory] >
                            state.beta[rhs][kRelabelCategory];
                   });
  if (std::is_sorted(order.begin(), order.end())) return state;

  std::vector<std::size_t> new_label(factories);
  std::vector<double> theta(factories);
  std::vector<Simplex> beta;
  beta.reserve(factories);
  for (std::size_t pos = 0; pos < factories; ++pos) {
    new_label[order[pos]] = pos;
    theta[pos] = state.theta[order[pos]];
    beta.push_back(state.beta[order[pos]]);
  }
  for (auto& z : state.z) z = new_label[z];
  state.theta = Simplex(std::move(theta));
  state.beta = std::move(beta);
  return state;
}

ChainOutput run_chain(const std::vector<BagTally>& bags,
                      const HierarchicalPriors& priors,
                      const ChainConfig& config) {
  if (config.thin < 1) throw DomainError("chain thinning must be at least 1");
  if (config.iterations <= config.burn_in) {
    throw DomainError("chain iterations must exceed burn-in");
  }
  Rng rng(config.seed);
  MixtureState state{std::vector<std::size_t>(bags.size(), 0),
                     sample_dirichlet(priors.alpha, rng),
                     {}};
  for (std::size_t f = 0; f < priors.factories(); ++f) {
    state.beta.push_back(sample_dirichlet(priors.eta, rng));
  }

  ChainOutput out;
  out.seed = config.seed;
  out.burn_in = config.burn_in;
  out.thin = config.thin;
  out.total_iterations = config.iterations;
  out.states.reserve((config.iterations - config.burn_in) / config.thin);
  for (std::uint64_t i = 1; i <= config.iterations; ++i) {
    state = gibbs_step(std::move(state), bags, priors, rng);
    if (i > config.burn_in && (i - config.burn_in) % config.thin == 0) {
      out.states.push_back(canonicalize_labels(state));
    }
  }
  return out;
}

std::vector<ChainOutput> run_chains(const std::vector<BagTally>& bags,
                                    const HierarchicalPriors& priors,
                                    const ChainConfig& config,
                                    std::size_t chains) {
  if (chains == 0) throw DomainError("at least one chain is required");
  std::vector<ChainOutput> out(chains);
  if (chains == 1) {
    out[0] = run_chain(bags, priors, config);
    return out;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(chains);
  for (std::size_t c = 0; c < chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        ChainConfig local = config;
        local.seed = derive_seed(config.seed, c);
        out[c] = run_chain(bags, priors, local);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

MixturePosteriorSummary summarize_chains(
    const std::vector<ChainOutput>& chains) {
  std::vector<const MixtureState*> states;
  for (const auto& chain : chains) {
    for (const auto& s : chain.states) states.push_back(&s);
  }
  if (states.empty()) throw DomainError("cannot summarize an empty chain");

  const std::size_t bags = states.front()->z.size();
  const std::size_t factories = states.front()->theta.size();
  const double weight = 1.0 / static_cast<double>(states.size());

  std::vector<std::vector<double>> assignment(
      bags, std::vector<double>(factories, 0.0));
  std::vector<const Simplex*> thetas;
  std::vector<std::vector<const Simplex*>> betas(factories);
  for (const MixtureState* s : states) {
    for (std::size_t b = 0; b < bags; ++b) assignment[b][s->z[b]] += weight;
    thetas.push_back(&s->theta);
    for (std::size_t f = 0; f < factories; ++f) betas[f].push_back(&s->beta[f]);
  }
  // Rows are frequencies; renormalize away accumulated rounding.
  for (auto& row : assignment) {
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& p : row) p /= sum;
  }
  std::vector<Simplex> beta_means;
  for (const auto& fb : betas) beta_means.push_back(mean_of(fb));
  return MixturePosteriorSummary{std::move(assignment), mean_of(thetas),
                                 std::move(beta_means)};
}

MixturePosteriorSummary summarize_chain(const ChainOutput& chain) {
  return summarize_chains({chain});
}

double dirichlet_multinomial_log_marginal(const CountVector& counts,
                                          const DirichletParams& params) {
  if (counts.size() != params.size()) {
    throw DomainError("dirichlet-multinomial marginal: dimension mismatch");
  }
  const double total = params.sum();
  double value = log_gamma(total) -
                 log_gamma(total + static_cast<double>(counts.total()));
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    value += log_gamma(params[k] + static_cast<double>(counts[k])) -
             log_gamma(params[k]);
  }
  return value;
}

MixturePosteriorSummary exact_posterior(const std::vector<BagTally>& bags,
                                        const HierarchicalPriors& priors,
                                        Labeling labeling) {
  if (priors.factories() != 2) {
    throw DomainError("exact_posterior supports exactly two factories");
  }
  if (bags.size() > kExactMaxBags) {
    throw DomainError("exact_posterior enumerates 2^B assignments and refuses "
                      "B = " + std::to_string(bags.size()) +
                      " (limit is B <= " + std::to_string(kExactMaxBags) + ")");
  }
  const std::size_t categories = priors.categories();
  for (const auto& bag : bags) {
    if (bag.counts.size() != categories) {
      throw DomainError("bag '" + bag.bag_id + "' does not match the colour "
                        "dimension of the priors");
    }
  }

  const std::size_t nbags = bags.size();
  const std::size_t configs = std::size_t{1} << nbags;
  const double eta_total = priors.eta.sum();
  const double alpha_total = priors.alpha.sum();

  struct Config {
    double log_weight;
    std::array<CountVector, 2> pooled;
    std::array<std::uint64_t, 2> assigned;
  };
  std::vector<Config> table;
  table.reserve(configs);
  std::vector<double> log_weights;
  log_weights.reserve(configs);
  for (std::size_t mask = 0; mask < configs; ++mask) {
    Config c{0.0,
             {CountVector::zeros(categories), CountVector::zeros(categories)},
             {0, 0}};
    for (std::size_t b = 0; b < nbags; ++b) {
      const std::size_t f = (mask >> b) & 1U;
      c.pooled[f] += bags[b].counts;
      ++c.assigned[f];
    }
    c.log_weight =
        dirichlet_multinomial_log_marginal(
            CountVector({c.assigned[0], c.assigned[1]}), priors.alpha) +
        dirichlet_multinomial_log_marginal(c.pooled[0], priors.eta) +
        dirichlet_multinomial_log_marginal(c.pooled[1], priors.eta);
    log_weights.push_back(c.log_weight);
    table.push_back(std::move(c));
  }
  const auto weights = normalize_log_weights(log_weights);

  std::vector<std::vector<double>> assignment(nbags, std::vector<double>(2, 0.0));
  std::vector<double> theta_mean(2, 0.0);
  std::vector<std::vector<double>> beta_mean(2,
                                             std::vector<double>(categories, 0.0));
  OrderingProbability ordering;

  for (std::size_t mask = 0; mask < configs; ++mask) {
    const double w = weights[mask];
    if (w == 0.0) continue;
    const Config& c = table[mask];

    // Conditional posterior means given z.
    std::array<double, 2> theta_z{};
    std::array<std::vector<double>, 2> beta_z;
    std::array<double, 2> conc_total{};
    for (std::size_t f = 0; f < 2; ++f) {
      theta_z[f] = (priors.alpha[f] + static_cast<double>(c.assigned[f])) /
                   (alpha_total + static_cast<double>(nbags));
      conc_total[f] = eta_total + static_cast<double>(c.pooled[f].total());
      beta_z[f].resize(categories);
      for (std::size_t k = 0; k < categories; ++k) {
        beta_z[f][k] =
            (priors.eta[k] + static_cast<double>(c.pooled[f][k])) / conc_total[f];
      }
    }

    if (labeling == Labeling::raw) {
      for (std::size_t b = 0; b < nbags; ++b) assignment[b][(mask >> b) & 1U] += w;
      for (std::size_t f = 0; f < 2; ++f) {
        theta_mean[f] += w * theta_z[f];
        for (std::size_t k = 0; k < categories; ++k) {
          beta_mean[f][k] += w * beta_z[f][k];
        }
      }
      continue;
    }

    // Canonical labels: factory 0 keeps its label iff X0 >= X1, where
    // X_f = beta_f[r] ~ Beta(a_f, b_f) independently given z.
    const std::size_t r = kRelabelCategory;
    std::array<double, 2> a{};
    std::array<double, 2> b{};
    for (std::size_t f = 0; f < 2; ++f) {
      a[f] = priors.eta[r] + static_cast<double>(c.pooled[f][r]);
      b[f] = conc_total[f] - a[f];
    }
    const double keep = ordering(a[0], b[0], a[1], b[1]);
    const double swap = 1.0 - keep;
    const double m0 = beta_z[0][r];
    const double m1 = beta_z[1][r];
    // Size-biased identities: E[X 1{X0 >= X1}] = E[X] P'(X0 >= X1) with X
    // replaced by its size-biased beta.
    const double x0_keep = m0 * ordering(a[0] + 1.0, b[0], a[1], b[1]);
    const double rest0_keep = (1.0 - m0) * ordering(a[0], b[0] + 1.0, a[1], b[1]);
    const double x1_swap = m1 * (1.0 - ordering(a[0], b[0], a[1] + 1.0, b[1]));
    const double rest1_swap =
        (1.0 - m1) * (1.0 - ordering(a[0], b[0], a[1], b[1] + 1.0));

    for (std::size_t bag = 0; bag < nbags; ++bag) {
      const std::size_t f = (mask >> bag) & 1U;
      assignment[bag][f] += w * keep;
      assignment[bag][1 - f] += w * swap;
    }
    theta_mean[0] += w * (keep * theta_z[0] + swap * theta_z[1]);
    theta_mean[1] += w * (keep * theta_z[1] + swap * theta_z[0]);

    std::array<double, 2> rest_total{};
    for (std::size_t f = 0; f < 2; ++f) rest_total[f] = 1.0 - beta_z[f][r];
    for (std::size_t k = 0; k < categories; ++k) {
      double top = 0.0;
      if (k == r) {
        top = x0_keep + x1_swap;
      } else {
        // Given beta_f[r] = x, the other components are (1 - x) times an
        // independent Dirichlet, so their means scale with (1 - x).
        top = beta_z[0][k] / rest_total[0] * rest0_keep +
              beta_z[1][k] / rest_total[1] * rest1_swap;
      }
      beta_mean[0][k] += w * top;
      beta_mean[1][k] += w * (beta_z[0][k] + beta_z[1][k] - top);
    }
  }

  std::vector<Simplex> beta_means;
  for (auto& row : beta_mean) beta_means.push_back(Simplex::normalized(row));
  for (auto& row : assignment) {
    const double sum = row[0] + row[1];
    row[0] /= sum;
    row[1] /= sum;
  }
  return MixturePosteriorSummary{std::move(assignment),
                                 Simplex::normalized(theta_mean),
                                 std::move(beta_means)};
}

}  // namespace mmsbayes

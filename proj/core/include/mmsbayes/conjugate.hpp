#pragma once

#include <optional>
#include <vector>

#include "mmsbayes/distributions.hpp"

namespace mmsbayes {

// A beta posterior together with what produced it. params is always
// Beta(prior.alpha + successes, prior.beta + failures).
struct BetaPosterior {
  BetaParams prior;
  CountVector data;  // (successes, failures)
  BetaParams params;
};

struct CredibleInterval {
  double level;
  double lower;
  double upper;
};

struct PosteriorSummary {
  double mean;
  std::optional<double> mode;  // undefined unless alpha > 1 and beta > 1
  double variance;
  CredibleInterval interval;   // equal-tailed
};

// Parallel arrays; theta strictly increasing on the open interval (0, 1).
struct DensityGrid {
  std::vector<double> theta;
  std::vector<double> density;
};

inline constexpr double kDefaultCredibleLevel = 0.95;

// data must be two-category (successes, failures).
BetaPosterior update_beta_binomial(const BetaParams& prior,
                                   const CountVector& data);
BetaPosterior update_beta_binomial(const BetaParams& prior, std::uint64_t y,
                                   std::uint64_t n);
// Sequential update: folds more data into an existing posterior.
BetaPosterior update_beta_binomial(const BetaPosterior& posterior,
                                   const CountVector& data);

DirichletParams update_dirichlet_multinomial(const DirichletParams& prior,
                                             const CountVector& data);

PosteriorSummary summarize_beta(const BetaParams& params,
                                double level = kDefaultCredibleLevel);

// Shortest interval holding `level` posterior mass, by golden-section search
// over the lower tail probability.
CredibleInterval hpd_interval(const BetaParams& params,
                              double level = kDefaultCredibleLevel);

// exp(beta_log_pdf) at theta_i = i / (points + 1), i = 1..points.
DensityGrid density_grid(const BetaParams& params, std::size_t points);

}  // namespace mmsbayes

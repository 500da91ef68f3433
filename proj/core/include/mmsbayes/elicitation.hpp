#pragma once

#include "mmsbayes/conjugate.hpp"
#include "mmsbayes/distributions.hpp"

namespace mmsbayes {

// One elicited statement "P(theta <= theta_value) = q".
struct QuantilePair {
  double q;
  double theta;
};

struct QuantileFit {
  enum class Status { converged, not_converged };

  Status status;
  BetaParams params;  // best parameters found, valid in either case
  double residual;    // max over both pairs of |I_theta(alpha, beta) - q|

  bool converged() const noexcept { return status == Status::converged; }
};

inline constexpr double kQuantileFitTolerance = 1e-8;

// alpha = mean * ess, beta = (1 - mean) * ess; ess is alpha + beta.
BetaParams fit_beta_from_mean_ess(double mean, double ess);

// Matches two CDF statements. Pairs must be strictly increasing in both q and
// theta, with every coordinate in (0, 1); otherwise DomainError. The first
// pair is matched exactly by an inner bisection on the mean for each trial
// ess; an outer bisection on log(ess) matches the second pair.
QuantileFit fit_beta_from_quantiles(QuantilePair first, QuantilePair second);

DensityGrid preview(const BetaParams& params, std::size_t points = 512);

}  // namespace mmsbayes

#include "mmsbayes/elicitation.hpp"

#include <algorithm>
#include <cmath>

#include "mmsbayes/error.hpp"
#include "mmsbayes/special.hpp"

namespace mmsbayes {

namespace {

constexpr double kMinEss = 1e-3;
constexpr double kMaxEss = 1e7;

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

double cdf(double theta, double mean, double ess) {
  return incomplete_beta_regularized(theta, mean * ess, (1.0 - mean) * ess);
}

// Mean such that Beta(mean*ess, (1-mean)*ess) has CDF q at theta. The CDF at a
// fixed point falls as the mean rises, so bisection on (0, 1) always brackets.
double match_mean(QuantilePair pair, double ess) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(pair.theta, mid, ess) > pair.q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::clamp(0.5 * (lo + hi), 1e-300, 1.0 - 1e-16);
}

}  // namespace

BetaParams fit_beta_from_mean_ess(double mean, double ess) {
  if (!in_open_unit(mean)) {
    throw DomainError("elicited mean must lie strictly inside (0, 1)");
  }
  if (!(ess > 0.0) || !std::isfinite(ess)) {
    throw DomainError("effective sample size must be finite and positive");
  }
  return BetaParams(mean * ess, (1.0 - mean) * ess);
}

QuantileFit fit_beta_from_quantiles(QuantilePair first, QuantilePair second) {
  for (const auto& p : {first, second}) {
    if (!in_open_unit(p.q) || !in_open_unit(p.theta)) {
      throw DomainError("quantile pairs need q and theta inside (0, 1)");
    }
  }
  if (!(first.theta < second.theta) || !(first.q < second.q)) {
    throw DomainError(
        "quantile pairs must be strictly increasing in both q and theta");
  }

  struct Candidate {
    double mean;
    double ess;
    double signed_gap;  // CDF at second.theta minus second.q
    double residual;
  };
  const auto evaluate = [&](double log_ess) {
    const double ess = std::exp(log_ess);
    const double mean = match_mean(first, ess);
    const double gap = cdf(second.theta, mean, ess) - second.q;
    const double first_gap = std::fabs(cdf(first.theta, mean, ess) - first.q);
    return Candidate{mean, ess, gap, std::max(first_gap, std::fabs(gap))};
  };

  double lo = std::log(kMinEss);
  double hi = std::log(kMaxEss);
  Candidate at_lo = evaluate(lo);
  Candidate at_hi = evaluate(hi);
  Candidate best = at_lo.residual <= at_hi.residual ? at_lo : at_hi;

  if (at_lo.signed_gap <= 0.0 && at_hi.signed_gap >= 0.0) {
    for (int i = 0; i < 200 && best.residual > 0.0; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const Candidate c = evaluate(mid);
      if (c.residual < best.residual) best = c;
      if (c.signed_gap < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }

  const BetaParams params(best.mean * best.ess, (1.0 - best.mean) * best.ess);
  const auto status = best.residual <= kQuantileFitTolerance
                          ? QuantileFit::Status::converged
                          : QuantileFit::Status::not_converged;
  return QuantileFit{status, params, best.residual};
}

DensityGrid preview(const BetaParams& params, std::size_t points) {
  return density_grid(params, points);
}

}  // namespace mmsbayes

#include "mmsbayes/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmsbayes/error.hpp"

namespace mmsbayes {

namespace {

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("credible level must lie in (0, 1)");
  }
}

}  // namespace

BetaPosterior update_beta_binomial(const BetaParams& prior,
                                   const CountVector& data) {
  if (data.size() != 2) {
    throw DomainError("beta-binomial update needs (successes, failures) data");
  }
  const BetaParams params(prior.alpha() + static_cast<double>(data[0]),
                          prior.beta() + static_cast<double>(data[1]));
  return BetaPosterior{prior, data, params};
}

BetaPosterior update_beta_binomial(const BetaParams& prior, std::uint64_t y,
                                   std::uint64_t n) {
  return update_beta_binomial(prior, CountVector::binary(y, n));
}

BetaPosterior update_beta_binomial(const BetaPosterior& posterior,
                                   const CountVector& data) {
  BetaPosterior next = update_beta_binomial(posterior.params, data);
  next.prior = posterior.prior;
  next.data = posterior.data + data;
  return next;
}

DirichletParams update_dirichlet_multinomial(const DirichletParams& prior,
                                             const CountVector& data) {
  if (prior.size() != data.size()) {
    throw DomainError("dirichlet-multinomial update: dimension mismatch (" +
                      std::to_string(prior.size()) + " vs " +
                      std::to_string(data.size()) + ")");
  }
  std::vector<double> updated(prior.concentration());
  for (std::size_t k = 0; k < updated.size(); ++k) {
    updated[k] += static_cast<double>(data[k]);
  }
  return DirichletParams(std::move(updated));
}

PosteriorSummary summarize_beta(const BetaParams& params, double level) {
  require_level(level);
  const double a = params.alpha();
  const double b = params.beta();
  const double s = a + b;

  PosteriorSummary out{};
  out.mean = a / s;
  if (a > 1.0 && b > 1.0) out.mode = (a - 1.0) / (s - 2.0);
  out.variance = a * b / (s * s * (s + 1.0));
  const double tail = 0.5 * (1.0 - level);
  out.interval = CredibleInterval{
      level, beta_quantile(Probability(tail), params).value(),
      beta_quantile(Probability(1.0 - tail), params).value()};
  return out;
}

CredibleInterval hpd_interval(const BetaParams& params, double level) {
  require_level(level);
  const auto width = [&](double lower_tail) {
    return beta_quantile(Probability(std::min(1.0, lower_tail + level)), params)
               .value() -
           beta_quantile(Probability(lower_tail), params).value();
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0 - level;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = width(x1);
  double f2 = width(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = width(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = width(x2);
    }
  }
  const double tail = 0.5 * (lo + hi);
  return CredibleInterval{
      level, beta_quantile(Probability(tail), params).value(),
      beta_quantile(Probability(std::min(1.0, tail + level)), params).value()};
}

DensityGrid density_grid(const BetaParams& params, std::size_t points) {
  if (points < 2) throw DomainError("density grid needs at least two points");
  DensityGrid grid;
  grid.theta.reserve(points);
  grid.density.reserve(points);
  const double step = 1.0 / static_cast<double>(points + 1);
  for (std::size_t i = 1; i <= points; ++i) {
    const double theta = static_cast<double>(i) * step;
    grid.theta.push_back(theta);
    grid.density.push_back(std::exp(beta_log_pdf(Probability(theta), params)));
  }
  return grid;
}

}  // namespace mmsbayes

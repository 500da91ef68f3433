#include "mmsbayes/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mmsbayes/error.hpp"
#include "mmsbayes/special.hpp"

namespace mmsbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// c * ln(x) with 0 * ln 0 = 0.
double xlogy(double c, double x) {
  if (c == 0.0) return 0.0;
  return c * std::log(x);
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DomainError(std::string(what) + ": dimension mismatch (" +
                      std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("probability must lie in [0, 1], got " +
                      std::to_string(value));
  }
}

Simplex::Simplex(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DomainError("simplex must be non-empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("simplex weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kTolerance) {
    throw DomainError("simplex weights must sum to 1, got " +
                      std::to_string(sum));
  }
}

Simplex Simplex::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("simplex weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw DomainError("cannot normalize all-zero weights");
  for (double& w : weights) w /= sum;
  return Simplex(std::move(weights));
}

Simplex Simplex::uniform(std::size_t size) {
  if (size == 0) throw DomainError("simplex must be non-empty");
  return Simplex(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

BetaParams::BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta)) {
    throw DomainError("beta hyperparameters must be finite and positive");
  }
}

DirichletParams::DirichletParams(std::vector<double> concentration)
    : concentration_(std::move(concentration)) {
  if (concentration_.size() < 2) {
    throw DomainError("dirichlet needs at least two categories");
  }
  for (double a : concentration_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("dirichlet concentrations must be finite and positive");
    }
  }
}

DirichletParams DirichletParams::symmetric(std::size_t size, double value) {
  return DirichletParams(std::vector<double>(size, value));
}

double DirichletParams::sum() const noexcept {
  return std::accumulate(concentration_.begin(), concentration_.end(), 0.0);
}

CountVector::CountVector(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)),
      total_(std::accumulate(counts_.begin(), counts_.end(),
                             std::uint64_t{0})) {}

CountVector CountVector::binary(std::uint64_t y, std::uint64_t n) {
  if (y > n) throw DomainError("successes exceed trials");
  return CountVector({y, n - y});
}

CountVector CountVector::zeros(std::size_t size) {
  return CountVector(std::vector<std::uint64_t>(size, 0));
}

CountVector& CountVector::operator+=(const CountVector& other) {
  if (counts_.empty()) {
    *this = other;
    return *this;
  }
  require_same_size(counts_.size(), other.counts_.size(), "count addition");
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    counts_[k] += other.counts_[k];
  }
  total_ += other.total_;
  return *this;
}

double beta_log_pdf(Probability theta, const BetaParams& params) {
  const double t = theta.value();
  const double a = params.alpha();
  const double b = params.beta();
  if (t == 0.0) {
    if (a > 1.0) return -kInf;
    if (a < 1.0) return kInf;
  }
  if (t == 1.0) {
    if (b > 1.0) return -kInf;
    if (b < 1.0) return kInf;
  }
  return xlogy(a - 1.0, t) + xlogy(b - 1.0, 1.0 - t) - log_beta_fn(a, b);
}

double binomial_log_pmf(std::uint64_t y, std::uint64_t n, Probability theta) {
  if (y > n) throw DomainError("binomial_log_pmf: y exceeds n");
  const double yd = static_cast<double>(y);
  const double nd = static_cast<double>(n);
  const double t = theta.value();
  const double coefficient =
      log_gamma(nd + 1.0) - log_gamma(yd + 1.0) - log_gamma(nd - yd + 1.0);
  return coefficient + xlogy(yd, t) + xlogy(nd - yd, 1.0 - t);
}

double dirichlet_log_pdf(const Simplex& x, const DirichletParams& params) {
  require_same_size(x.size(), params.size(), "dirichlet_log_pdf");
  double kernel = 0.0;
  double log_norm = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = params[k];
    if (x[k] == 0.0 && a != 1.0) return a > 1.0 ? -kInf : kInf;
    kernel += xlogy(a - 1.0, x[k]);
    log_norm += log_gamma(a);
  }
  log_norm -= log_gamma(params.sum());
  return kernel - log_norm;
}

double multinomial_log_pmf(const CountVector& counts, const Simplex& x) {
  require_same_size(counts.size(), x.size(), "multinomial_log_pmf");
  double value = log_gamma(static_cast<double>(counts.total()) + 1.0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double c = static_cast<double>(counts[k]);
    value -= log_gamma(c + 1.0);
    value += xlogy(c, x[k]);
  }
  return value;
}

Probability regularized_incomplete_beta(Probability theta,
                                        const BetaParams& params) {
  return Probability(incomplete_beta_regularized(theta.value(), params.alpha(),
                                                 params.beta()));
}

Probability beta_quantile(Probability q, const BetaParams& params) {
  const double target = q.value();
  if (target == 0.0) return Probability(0.0);
  if (target == 1.0) return Probability(1.0);
  double lo = 0.0;
  double hi = 1.0;
  // Bisect until the bracket cannot shrink further in double precision.
  for (int i = 0; i < 2200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double cdf =
        incomplete_beta_regularized(mid, params.alpha(), params.beta());
    if (cdf < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double cdf_lo =
      incomplete_beta_regularized(lo, params.alpha(), params.beta());
  const double cdf_hi =
      incomplete_beta_regularized(hi, params.alpha(), params.beta());
  return Probability(std::fabs(cdf_lo - target) <= std::fabs(cdf_hi - target)
                         ? lo
                         : hi);
}

double sample_log_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma shape must be finite and positive");
  }
  if (shape < 1.0) {
    // G(a) = G(a + 1) * U^(1/a)
    return sample_log_gamma(shape + 1.0, rng) +
           std::log(rng.uniform_open()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return std::log(d) + std::log(v);
    }
  }
}

Probability sample_beta(const BetaParams& params, Rng& rng) {
  const double lx = sample_log_gamma(params.alpha(), rng);
  const double ly = sample_log_gamma(params.beta(), rng);
  // x / (x + y) evaluated as a logistic of the log ratio.
  return Probability(1.0 / (1.0 + std::exp(ly - lx)));
}

Simplex sample_dirichlet(const DirichletParams& params, Rng& rng) {
  std::vector<double> logs(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    logs[k] = sample_log_gamma(params[k], rng);
  }
  return Simplex::normalized(normalize_log_weights(logs));
}

std::size_t sample_categorical(const Simplex& x, Rng& rng) {
  const auto& w = x.weights();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] <= 0.0) continue;
    cumulative += w[k];
    last_positive = k;
    if (u < cumulative) return k;
  }
  return last_positive;
}

CountVector sample_multinomial(std::uint64_t n, const Simplex& x, Rng& rng) {
  std::vector<std::uint64_t> counts(x.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    ++counts[sample_categorical(x, rng)];
  }
  return CountVector(std::move(counts));
}

}  // namespace mmsbayes

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mmsbayes/rng.hpp"

namespace mmsbayes {

// A scalar in [0, 1].
class Probability {
 public:
  explicit Probability(double value);

  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

// Non-negative weights summing to 1 within kTolerance.
class Simplex {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit Simplex(std::vector<double> weights);

  // Divides by the sum; throws if any weight is negative or the sum is zero.
  static Simplex normalized(std::vector<double> weights);
  static Simplex uniform(std::size_t size);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  friend bool operator==(const Simplex&, const Simplex&) = default;

 private:
  std::vector<double> weights_;
};

// Hyperparameters of a beta prior: pseudo-successes and pseudo-failures.
class BetaParams {
 public:
  BetaParams(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const BetaParams&, const BetaParams&) = default;

 private:
  double alpha_;
  double beta_;
};

class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> concentration);
  static DirichletParams symmetric(std::size_t size, double value);

  std::size_t size() const noexcept { return concentration_.size(); }
  double operator[](std::size_t i) const { return concentration_[i]; }
  const std::vector<double>& concentration() const noexcept {
    return concentration_;
  }
  double sum() const noexcept;

  friend bool operator==(const DirichletParams&,
                         const DirichletParams&) = default;

 private:
  std::vector<double> concentration_;
};

// Per-category counts. The total is always the sum of the counts.
class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::vector<std::uint64_t> counts);
  // Two-category (success, failure) vector from y successes in n trials.
  static CountVector binary(std::uint64_t y, std::uint64_t n);
  static CountVector zeros(std::size_t size);

  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts_[i]; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }

  CountVector& operator+=(const CountVector& other);
  friend CountVector operator+(CountVector lhs, const CountVector& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend bool operator==(const CountVector&, const CountVector&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Densities and mass functions, all in log space. Boundary points of measure
// zero return -inf (or +inf for an integrable pole) instead of throwing, and
// every pmf uses 0 * ln 0 = 0.

double beta_log_pdf(Probability theta, const BetaParams& params);

// ln C(n, y) + y ln theta + (n - y) ln(1 - theta). Throws if y > n.
double binomial_log_pmf(std::uint64_t y, std::uint64_t n, Probability theta);

double dirichlet_log_pdf(const Simplex& x, const DirichletParams& params);

// ln(n! / prod c_k!) + sum c_k ln x_k.
double multinomial_log_pmf(const CountVector& counts, const Simplex& x);

// Beta CDF I_theta(alpha, beta), absolute error <= 1e-12.
Probability regularized_incomplete_beta(Probability theta,
                                        const BetaParams& params);

// Inverse beta CDF by bisection; q = 0 and q = 1 map to the boundary.
Probability beta_quantile(Probability q, const BetaParams& params);

// Samplers. Gamma variates use Marsaglia and Tsang with the U^(1/a) boost for
// shape < 1, carried in log space so tiny shapes do not underflow.

double sample_log_gamma(double shape, Rng& rng);
Probability sample_beta(const BetaParams& params, Rng& rng);
Simplex sample_dirichlet(const DirichletParams& params, Rng& rng);
// Inverse CDF over cumulative weights.
std::size_t sample_categorical(const Simplex& x, Rng& rng);
CountVector sample_multinomial(std::uint64_t n, const Simplex& x, Rng& rng);

}  // namespace mmsbayes

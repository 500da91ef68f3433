#pragma once

#include <span>
#include <vector>

namespace mmsbayes {

// ln Gamma(x) for finite x > 0. Relative error stays below 1e-12 on
// [1e-3, 1e6]; near the zeros at x = 1 and x = 2 a Taylor series in
// (x - 1) replaces the Lanczos sum so relative accuracy survives there too.
// Throws DomainError for x <= 0 or non-finite x.
double log_gamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta_fn(double a, double b);

// ln sum exp(values). Returns -inf for an empty span or when every entry is
// -inf.
double log_sum_exp(std::span<const double> values);

// exp(values - log_sum_exp(values)). If every entry is -inf the result is
// uniform.
std::vector<double> normalize_log_weights(std::span<const double> values);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction with
// the usual switch to 1 - I_{1-x}(b, a) above x = (a + 1) / (a + b + 2).
double incomplete_beta_regularized(double x, double a, double b);

}  // namespace mmsbayes

#include "mmsbayes/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mmsbayes/error.hpp"

namespace mmsbayes {

namespace {

// Godfrey's g = 7, n = 9 Lanczos coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993227684700473478,  676.520368121885098567009190444019,
    -1259.13921672240287047156078755283, 771.3234287776530788486528258894,
    -176.61502916214059906584551354,     12.507343278686904814458936853,
    -0.13857109526572011689554707,       9.984369578019570859563e-6,
    1.50563273514931155834e-7};

// zeta(k) for k = 2..30.
constexpr std::array<double, 29> kZeta = {
    1.64493406684822643647, 1.2020569031595942854,  1.08232323371113819152,
    1.03692775514336992633, 1.01734306198444913971, 1.00834927738192282684,
    1.00407735619794433938, 1.00200839282608221442, 1.00099457512781808534,
    1.00049418860411946456, 1.0002460865533080483,  1.00012271334757848915,
    1.00006124813505870483, 1.00003058823630702049, 1.00001528225940865187,
    1.00000763719763789976, 1.00000381729326499984, 1.00000190821271655394,
    1.0000009539620338728,  1.00000047693298678781, 1.00000023845050272773,
    1.00000011921992596531, 1.00000005960818905126, 1.00000002980350351465,
    1.00000001490155482837, 1.00000000745071178984, 1.00000000372533402479,
    1.00000000186265972351, 1.00000000093132743242};

constexpr double kEulerGamma = 0.577215664901532860607;

// Radius around x = 1 and x = 2 served by the series.
constexpr double kSeriesRadius = 0.2;

// ln Gamma(1 + eps) = -gamma*eps + sum_{k>=2} (-1)^k zeta(k) eps^k / k.
double log_gamma_one_plus(double eps) {
  double sum = 0.0;
  double power = eps;
  for (std::size_t i = 0; i < kZeta.size(); ++i) {
    power *= eps;
    const int k = static_cast<int>(i) + 2;
    const double term = kZeta[i] * power / k;
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum - kEulerGamma * eps;
}

double log_gamma_lanczos(double x) {
  const double xm1 = x - 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    acc += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) -
         t + std::log(acc);
}

// Continued fraction for I_x(a, b); valid (fast) for x < (a+1)/(a+b+2).
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIterations = 20000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma requires a finite positive argument");
  }
  if (x == 1.0 || x == 2.0) return 0.0;

  // Shift small arguments up with Gamma(x + 1) = x Gamma(x).
  double shift = 0.0;
  while (x < 1.0 - kSeriesRadius) {
    shift += std::log(x);
    x += 1.0;
  }
  double value = 0.0;
  if (std::fabs(x - 1.0) <= kSeriesRadius) {
    value = log_gamma_one_plus(x - 1.0);
  } else if (std::fabs(x - 2.0) <= kSeriesRadius) {
    const double eps = x - 2.0;
    value = std::log1p(eps) + log_gamma_one_plus(eps);
  } else {
    value = log_gamma_lanczos(x);
  }
  return value - shift;
}

double log_beta_fn(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

std::vector<double> normalize_log_weights(std::span<const double> values) {
  std::vector<double> out(values.size());
  if (values.empty()) return out;
  const double total = log_sum_exp(values);
  if (total == -std::numeric_limits<double>::infinity()) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::exp(values[i] - total);
  }
  return out;
}

double incomplete_beta_regularized(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("incomplete beta requires finite positive parameters");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("incomplete beta requires x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta_fn(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
  }
  const double upper =
      std::exp(log_front) * beta_continued_fraction(1.0 - x, b, a) / b;
  return std::clamp(1.0 - upper, 0.0, 1.0);
}

}  // namespace mmsbayes

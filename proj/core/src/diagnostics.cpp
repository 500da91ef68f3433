#include "mmsbayes/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mmsbayes/error.hpp"

namespace mmsbayes {

namespace {

constexpr std::size_t kMinDraws = 4;

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Sample variance with the n - 1 denominator.
double variance(std::span<const double> x, double mu) {
  double acc = 0.0;
  for (double v : x) acc += (v - mu) * (v - mu);
  return acc / static_cast<double>(x.size() - 1);
}

bool is_constant(std::span<const double> x) {
  return std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) ==
         x.end();
}

void require_length(std::size_t n) {
  if (n < kMinDraws) {
    throw DomainError("diagnostics need at least " + std::to_string(kMinDraws) +
                      " draws, got " + std::to_string(n));
  }
}

}  // namespace

std::optional<double> effective_sample_size(std::span<const double> draws) {
  require_length(draws.size());
  if (is_constant(draws)) return std::nullopt;
  const std::size_t n = draws.size();
  const double mu = mean(draws);

  const auto autocovariance = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      acc += (draws[i] - mu) * (draws[i + lag] - mu);
    }
    return acc / static_cast<double>(n);
  };

  const double gamma0 = autocovariance(0);
  if (!(gamma0 > 0.0)) return std::nullopt;

  double pair_sum = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double rho_even = m == 0 ? 1.0 : autocovariance(2 * m) / gamma0;
    const double rho_odd = autocovariance(2 * m + 1) / gamma0;
    const double pair = rho_even + rho_odd;
    if (!(pair > 0.0)) break;
    pair_sum += pair;
  }
  const double tau = -1.0 + 2.0 * pair_sum;
  if (!(tau > 0.0)) return static_cast<double>(n);
  return static_cast<double>(n) / tau;
}

std::optional<double> split_r_hat(std::span<const double> draws) {
  require_length(draws.size());
  if (is_constant(draws)) return std::nullopt;
  const std::size_t half = draws.size() / 2;
  const auto first = draws.subspan(0, half);
  const auto second = draws.subspan(draws.size() - half, half);

  const double m1 = mean(first);
  const double m2 = mean(second);
  const double within = 0.5 * (variance(first, m1) + variance(second, m2));
  if (!(within > 0.0)) return std::nullopt;

  const double n = static_cast<double>(half);
  const double grand = 0.5 * (m1 + m2);
  // Between-chain variance with m - 1 = 1 degree of freedom, times n.
  const double between =
      n * ((m1 - grand) * (m1 - grand) + (m2 - grand) * (m2 - grand));
  const double pooled = (n - 1.0) / n * within + between / n;
  return std::sqrt(pooled / within);
}

std::vector<ScalarDiagnostics> diagnostics(const ChainOutput& chain) {
  require_length(chain.states.size());
  const auto& first = chain.states.front();
  const std::size_t factories = first.theta.size();
  const std::size_t categories = first.beta.empty() ? 0 : first.beta[0].size();

  std::vector<ScalarDiagnostics> out;
  std::vector<double> trace(chain.states.size());
  const auto push = [&](std::string name) {
    out.push_back(ScalarDiagnostics{std::move(name), effective_sample_size(trace),
                                    split_r_hat(trace)});
  };
  for (std::size_t f = 0; f < factories; ++f) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
      trace[i] = chain.states[i].theta[f];
    }
    push("theta[" + std::to_string(f) + "]");
  }
  for (std::size_t f = 0; f < factories; ++f) {
    for (std::size_t k = 0; k < categories; ++k) {
      for (std::size_t i = 0; i < trace.size(); ++i) {
        trace[i] = chain.states[i].beta[f][k];
      }
      push("beta[" + std::to_string(f) + "][" + std::to_string(k) + "]");
    }
  }
  return out;
}

}  // namespace mmsbayes

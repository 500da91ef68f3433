#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmsbayes/hierarchical.hpp"

namespace mmsbayes {

// Convergence diagnostics for one scalar of the chain. Both values are
// nullopt when the scalar has zero variance; that is the sentinel for an
// undefined estimate.
struct ScalarDiagnostics {
  std::string name;  // "theta[f]" or "beta[f][k]"
  std::optional<double> effective_sample_size;
  std::optional<double> split_r_hat;
};

// Geyer's initial positive sequence estimator: N / (-1 + 2 sum_m Gamma_m)
// where Gamma_m = rho(2m) + rho(2m+1) is summed while positive.
std::optional<double> effective_sample_size(std::span<const double> draws);

// Classic potential scale reduction over the two halves of one chain (the
// middle draw is dropped when the length is odd).
std::optional<double> split_r_hat(std::span<const double> draws);

// Diagnostics for every theta_f and beta_{f,k}; needs at least 4 states.
std::vector<ScalarDiagnostics> diagnostics(const ChainOutput& chain);

}  // namespace mmsbayes

#include <benchmark/benchmark.h>

#include "mmsbayes/conjugate.hpp"
#include "mmsbayes/hierarchical.hpp"
#include "mmsbayes/special.hpp"

using namespace mmsbayes;

namespace {

std::vector<Simplex> two_profiles() {
  return {Simplex({0.25, 0.25, 0.125, 0.125, 0.125, 0.125}),
          Simplex({0.207, 0.205, 0.198, 0.135, 0.131, 0.124})};
}

std::vector<BagTally> bags(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return simulate_bags(Simplex({0.6, 0.4}), two_profiles(),
                       std::vector<std::uint64_t>(count, 50), rng)
      .bags;
}

}  // namespace

static void BM_LogGamma(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_gamma(x));
    x = x < 200 ? x * 1.37 : 0.5;
  }
}
BENCHMARK(BM_LogGamma);

static void BM_IncompleteBeta(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(incomplete_beta_regularized(x, 27, 84));
    x = x < 0.98 ? x + 0.01 : 0.01;
  }
}
BENCHMARK(BM_IncompleteBeta);

static void BM_SummarizeBeta(benchmark::State& state) {
  const BetaParams p(27, 84);
  for (auto _ : state) benchmark::DoNotOptimize(summarize_beta(p));
}
BENCHMARK(BM_SummarizeBeta);

static void BM_GibbsSweep(benchmark::State& state) {
  const auto data = bags(static_cast<std::size_t>(state.range(0)), 1);
  const HierarchicalPriors priors{DirichletParams::symmetric(2, 1.0),
                                  DirichletParams::symmetric(6, 1.0)};
  Rng rng(2);
  MixtureState s{std::vector<std::size_t>(data.size(), 0), Simplex::uniform(2),
                 two_profiles()};
  for (auto _ : state) s = gibbs_step(std::move(s), data, priors, rng);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GibbsSweep)->Arg(8)->Arg(50);

static void BM_ExactPosterior(benchmark::State& state) {
  const auto data = bags(static_cast<std::size_t>(state.range(0)), 3);
  const HierarchicalPriors priors{DirichletParams::symmetric(2, 1.0),
                                  DirichletParams::symmetric(6, 1.0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_posterior(data, priors, Labeling::canonical));
  }
}
BENCHMARK(BM_ExactPosterior)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

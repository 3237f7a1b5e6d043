#include <benchmark/benchmark.h>

#include "pmtm/baselines.hpp"
#include "pmtm/pmtm.hpp"

using namespace pmtm;

namespace {

SpikeEnsemble benchmark_spikes(int k, int trials) {
  const Cif cif = linear_link_cif(simulate_ar(ArModel::benchmark(), k, 1), 0.12);
  return generate_spikes(cif.rates, trials, 2);
}

void BM_Dpss(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_dpss(k, 5.0, 8));
}
BENCHMARK(BM_Dpss)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_WeightedGram(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const DesignMatrix a(k, k / 2);
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(k, 0.5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(a.weighted_gram(w));
}
BENCHMARK(BM_WeightedGram)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_EStep(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const SpikeEnsemble s = benchmark_spikes(k, 10);
  const TaperSet t = generate_dpss(k, 5.0, 1);
  const AuxStatistic aux = build_aux_statistic(s, t.tapers.row(0).transpose(), estimate_mean_rate(s));
  const DesignMatrix design(k, k / 2);
  SpectralParams theta;
  theta.variances = Eigen::VectorXd::Constant(design.parameter_count(), 1e-2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        e_step_mode(theta, aux, design, EmConfig{}, std::nullopt, CovarianceOutput::marginal));
  }
}
BENCHMARK(BM_EStep)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Pmtm(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const SpikeEnsemble s = benchmark_spikes(k, 10);
  PmtmOptions opt;
  opt.em.max_em_iters = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run_pmtm(s, opt));
}
BENCHMARK(BM_Pmtm)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_StateSpace(benchmark::State& state) {
  const SpikeEnsemble s = benchmark_spikes(512, 10);
  for (auto _ : state) benchmark::DoNotOptimize(fit_random_walk(s));
}
BENCHMARK(BM_StateSpace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "sonde/additive_inference.hpp"
#include "sonde/montecarlo.hpp"
#include "sonde/shell_inference.hpp"
#include "sonde/simulate.hpp"

namespace {

using namespace sonde;

void BM_SimulateShell(benchmark::State& state) {
  ModelSpec model = example_shell_model();
  model.modes = static_cast<int>(state.range(0));
  std::uint32_t replication = 0;
  for (auto _ : state) {
    const FourierPath path = simulate(model, 1234, replication++);
    benchmark::DoNotOptimize(path.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateShell)->Arg(60)->Arg(1000);

void BM_SimulateAdditive(benchmark::State& state) {
  ModelSpec model = example_additive_model();
  model.modes = static_cast<int>(state.range(0));
  std::uint32_t replication = 0;
  for (auto _ : state) {
    const FourierPath path = simulate(model, 1234, replication++);
    benchmark::DoNotOptimize(path.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateAdditive)->Arg(60)->Arg(1000);

void BM_NewtonMle(benchmark::State& state) {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 99, 0);
  const ShellObservations obs = ShellObservations::from_path(path, 60);
  for (auto _ : state) {
    const EstimateReport est = mle_numeric(obs);
    benchmark::DoNotOptimize(est.theta);
  }
}
BENCHMARK(BM_NewtonMle);

void BM_BayesPosteriorMean(benchmark::State& state) {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 99, 0);
  const ShellObservations obs = ShellObservations::from_path(path, 60);
  for (auto _ : state) {
    const EstimateReport est = bayes_posterior_mean(obs);
    benchmark::DoNotOptimize(est.theta);
  }
}
BENCHMARK(BM_BayesPosteriorMean);

void BM_LocalLikelihoodRatio(benchmark::State& state) {
  const ModelSpec model = example_shell_model();
  const FourierPath path = simulate(model, 99, 0);
  const ShellObservations obs = ShellObservations::from_path(path, 60);
  const LanStatistics lan = lan_statistics(obs, model.theta0, model.vartheta0());
  double s = 0.0;
  for (auto _ : state) {
    s += 1e-6;
    benchmark::DoNotOptimize(lan.log_z(s, 0.5));
  }
}
BENCHMARK(BM_LocalLikelihoodRatio);

void BM_DriftRecovery(benchmark::State& state) {
  const ModelSpec model = example_additive_model();
  const FourierPath path = simulate(model, 7, 0);
  for (auto _ : state) {
    for (int k = 1; k <= model.modes; ++k) {
      const auto obs = IncrementObservations::from_path(path, k, 0.01, 0.02);
      benchmark::DoNotOptimize(recover_drift_two_point(obs));
    }
  }
  state.SetItemsProcessed(state.iterations() * model.modes);
}
BENCHMARK(BM_DriftRecovery);

void BM_ReconstructField(benchmark::State& state) {
  const ModelSpec model = example_additive_model();
  const FourierPath path = simulate(model, 7, 0);
  FieldRequest request;
  request.time = 0.2;
  request.truncation = static_cast<int>(state.range(0));
  request.resolution = 0.01;
  request.want_u = false;
  for (auto _ : state) {
    const FieldSample field = reconstruct_field(path, request);
    benchmark::DoNotOptimize(field.ux.data());
  }
}
BENCHMARK(BM_ReconstructField)->Arg(1000)->Arg(30000);

void BM_Campaign(benchmark::State& state) {
  CampaignConfig cfg;
  cfg.model = example_additive_model();
  cfg.replications = 100;
  cfg.sweep = {55};
  cfg.estimators = {"sigma_fourier"};
  cfg.seed = 5;
  cfg.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const CampaignSummary summary = run_campaign(cfg);
    benchmark::DoNotOptimize(summary.tracks.data());
  }
}
BENCHMARK(BM_Campaign)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "srcf/bench.hpp"

namespace {

using namespace srcf;

IntegrationScheme scheme_arg(std::int64_t kind) {
  switch (static_cast<SchemeKind>(kind)) {
    case SchemeKind::kSif3:
      return IntegrationScheme::sif3(1);
    case SchemeKind::kSif5:
      return IntegrationScheme::sif5(1);
    case SchemeKind::kQsif5:
      return IntegrationScheme::qsif5(1);
    case SchemeKind::kCkf5:
      return IntegrationScheme::ckf5();
    default:
      return IntegrationScheme::ckf3();
  }
}

void BM_BuildRule(benchmark::State& state) {
  const IntegrationScheme s = scheme_arg(state.range(0));
  const Index n = state.range(1);
  RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(build_rule(s, n, rng));
  state.SetLabel(std::string(to_string(s.kind)));
}
BENCHMARK(BM_BuildRule)
    ->ArgsProduct({{static_cast<int>(SchemeKind::kSif3), static_cast<int>(SchemeKind::kSif5),
                    static_cast<int>(SchemeKind::kQsif5)},
                   {6, 10, 20}});

void BM_ExpectSumPowers(benchmark::State& state) {
  const IntegrationScheme s = IntegrationScheme::sif5(static_cast<int>(state.range(0)));
  const GaussianBelief b{VectorXd::Zero(6), MatrixXd::Identity(6, 6)};
  const Integrand g = Integrand::scalar(g_sum_powers);
  RngStream rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(expect(g, b, s, rng));
}
BENCHMARK(BM_ExpectSumPowers)->Arg(1)->Arg(10);

// Prediction half of one growth-model step (the correction is O(n^2)).
void BM_GrowthFilterStep(benchmark::State& state) {
  const IntegrationScheme s = scheme_arg(state.range(0));
  GrowthModel growth;
  const StateSpaceModel model = growth.model();
  const GaussianBelief prior = growth.initial_belief();
  RngStream rng(3);
  for (auto _ : state) {
    const GaussianBelief pred = predict_state(prior, model, s, rng);
    benchmark::DoNotOptimize(predict_observation(pred, model, s, rng));
  }
  state.SetLabel(std::string(to_string(s.kind)));
}
BENCHMARK(BM_GrowthFilterStep)
    ->Arg(static_cast<int>(SchemeKind::kCkf3))
    ->Arg(static_cast<int>(SchemeKind::kCkf5))
    ->Arg(static_cast<int>(SchemeKind::kSif5));

}  // namespace
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "bsfw/estimators.hpp"
#include "bsfw/ingest.hpp"

namespace {

void BM_LogisticFullGradient(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  bsfw::Dataset d = bsfw::synth_logistic(500, m, 0.02, 7);
  const bsfw::LogisticProblem p(std::move(d.features), std::move(d.labels));
  bsfw::Vector x(500, 0.01), g(500);
  for (auto _ : state) {
    p.grad(x, g);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_LogisticFullGradient)->Arg(2000)->Arg(20000);

void BM_BatchEstimatorStep(benchmark::State& state) {
  bsfw::Dataset d = bsfw::synth_logistic(500, 2000, 0.02, 7);
  const bsfw::LogisticProblem p(std::move(d.features), std::move(d.labels));
  bsfw::Vector x0(500, 0.0), x1(500, 0.01);
  bsfw::Estimator est({.kind = bsfw::EstimatorKind::Saga, .batch_size = static_cast<int>(state.range(0))},
                      p, x0, 1);
  long t = 1;
  for (auto _ : state) {
    est.step(p, x1, x0, t++);
    benchmark::DoNotOptimize(est.current().data());
  }
}
BENCHMARK(BM_BatchEstimatorStep)->Arg(10)->Arg(100);

}  // namespace

#include <benchmark/benchmark.h>

#include "bsfw/constraints.hpp"
#include "bsfw/rng.hpp"

namespace {

void BM_LmoL1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  bsfw::Rng rng(1);
  bsfw::Vector g(static_cast<std::size_t>(n));
  for (double& v : g) v = rng.next_gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsfw::lmo_l1(g, 2.0));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LmoL1)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_LmoNuclear(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  bsfw::Rng rng(2);
  bsfw::DenseMatrix g(n, n);
  for (double& v : g.data()) v = rng.next_gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bsfw::lmo_nuclear(g, 2.0, 1e-8, 10000));
  }
}
BENCHMARK(BM_LmoNuclear)->Arg(16)->Arg(64)->Arg(128);

}  // namespace

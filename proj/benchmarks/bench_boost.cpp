#include <benchmark/benchmark.h>

#include "bsfw/boosting.hpp"
#include "bsfw/rng.hpp"

namespace {

void BM_BoostL1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double delta = 1.0 / static_cast<double>(state.range(1));
  const auto set = bsfw::ConstraintSet::l1_ball(2.0, n);
  bsfw::Rng rng(3);
  bsfw::Vector m(static_cast<std::size_t>(n)), x(static_cast<std::size_t>(n), 0.0);
  for (double& v : m) v = rng.next_gaussian();
  bsfw::BoostConfig cfg;
  cfg.max_rounds = 10000;
  cfg.tolerance = delta;
  long long rounds = 0;
  for (auto _ : state) {
    const auto out = bsfw::boost(m, x, set, cfg);
    rounds += out.rounds;
    benchmark::DoNotOptimize(out.direction.data());
  }
  state.counters["rounds/iter"] =
      benchmark::Counter(static_cast<double>(rounds) / static_cast<double>(state.iterations()));
}
BENCHMARK(BM_BoostL1)->Args({500, 100})->Args({500, 10000})->Args({5000, 10000});

}  // namespace

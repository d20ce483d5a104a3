#include <benchmark/benchmark.h>

#include "heckepair/hecke_algebra.hpp"
#include "heckepair/kernels.hpp"
#include "heckepair/schlichting.hpp"

using namespace heckepair;

namespace {

PairPresentation family(int which) {
  switch (which) {
    case 0: return make_sl2_pair({2});
    case 1: return make_baumslag_solitar_pair(2, 3);
    default: return make_lamplighter_pair(2, 8);
  }
}

void bm_expand_ball(benchmark::State& state) {
  const auto pres = family(static_cast<int>(state.range(0)));
  const int radius = static_cast<int>(state.range(1));
  std::size_t size = 0;
  for (auto _ : state) {
    const auto t = expand_ball(pres, radius);
    size = t.size();
    benchmark::DoNotOptimize(size);
  }
  state.counters["cosets"] = static_cast<double>(size);
}
BENCHMARK(bm_expand_ball)->ArgsProduct({{0, 1, 2}, {2, 3, 4}})->Unit(benchmark::kMillisecond);

void bm_level_order(benchmark::State& state) {
  const auto t = expand_ball(family(static_cast<int>(state.range(0))), 3);
  for (auto _ : state) {
    // fresh object each time: the order is memoized per instance
    const auto flc = level_action(t, 3);
    benchmark::DoNotOptimize(flc.order());
  }
}
BENCHMARK(bm_level_order)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void bm_convolve(benchmark::State& state) {
  const auto t = expand_ball(family(static_cast<int>(state.range(0))), 4);
  const auto dcs = double_cosets_up_to(t, 2);
  for (auto _ : state) {
    for (const auto& a : dcs)
      for (const auto& b : dcs) benchmark::DoNotOptimize(convolve(a, b, t));
  }
}
BENCHMARK(bm_convolve)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void bm_is_cnd(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::abs(i - j);
  const auto k = make_kernel(m);
  for (auto _ : state) benchmark::DoNotOptimize(is_cnd(k, kDefaultTolerance));
}
BENCHMARK(bm_is_cnd)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

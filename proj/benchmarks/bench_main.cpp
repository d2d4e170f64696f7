#include <benchmark/benchmark.h>

#include "jst/coeffs.hpp"
#include "jst/counting.hpp"
#include "jst/grid.hpp"
#include "jst/measures.hpp"
#include "jst/region.hpp"

namespace {

void BM_ExpandEta(benchmark::State& state) {
  const auto d = *jst::builtin_descriptor("5.4.a.a");
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jst::expand_eta_quotient(d, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExpandEta)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_DMn(benchmark::State& state) {
  for (auto _ : state) {
    for (int m = 1; m <= 20; ++m) {
      for (int n = 1; n <= 20; ++n) benchmark::DoNotOptimize(jst::d_mn(m, n));
    }
  }
}
BENCHMARK(BM_DMn)->Unit(benchmark::kMillisecond);

void BM_Quadrature(benchmark::State& state) {
  const auto region = jst::sign_product_region(2, 2);
  const double target = state.range(0) == 6 ? 1e-6 : 1e-8;
  for (auto _ : state) benchmark::DoNotOptimize(jst::mu_jst_region(region, target));
}
BENCHMARK(BM_Quadrature)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_GridClassify(benchmark::State& state) {
  const auto region = jst::disk_region(0, 0, 1);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(jst::classify_boxes(region, m, 1));
}
BENCHMARK(BM_GridClassify)->Arg(32)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SignSeries(benchmark::State& state) {
  const auto f = jst::expand_eta_quotient(*jst::builtin_descriptor("5.4.a.a"), 100'000);
  const auto g = jst::expand_eta_quotient(*jst::builtin_descriptor("6.6.a.a"), 100'000);
  const auto cps = jst::default_checkpoints(100'000, 20);
  for (auto _ : state) benchmark::DoNotOptimize(jst::sign_density_series(f, g, 2, 2, cps));
}
BENCHMARK(BM_SignSeries)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

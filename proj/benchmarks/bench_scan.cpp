#include <benchmark/benchmark.h>

#include "thzorient/scans.hpp"
#include "thzorient/units.hpp"

using namespace thzo;

// One mid-range survey cell (B, T), the unit of scan work.
static void BM_ScanCell(benchmark::State& state) {
  const double B = 1.0, T = 100.0;
  ScanOptions opt;
  AxisSpec Ba{"B", "cm^-1", "lin", B, B, 1};
  AxisSpec Ta{"T", "K", "lin", T, T, 1};
  for (auto _ : state) {
    const ScanResult r = scan_B_T(Ba, Ta, default_field(), 1.0, opt);
    benchmark::DoNotOptimize(r.total[0]);
  }
}
BENCHMARK(BM_ScanCell)->Unit(benchmark::kMillisecond)->Iterations(3);

// Small survey row, exercising the work queue and ordered reduction.
static void BM_ScanRow(benchmark::State& state) {
  ScanOptions opt;
  opt.workers = static_cast<int>(state.range(0));
  AxisSpec Ba{"B", "cm^-1", "log", 2.0, 20.0, 4};
  AxisSpec Ta{"T", "K", "lin", 0.0, 100.0, 2};
  for (auto _ : state) {
    const ScanResult r = scan_B_T(Ba, Ta, default_field(), 1.0, opt);
    benchmark::DoNotOptimize(r.total.back());
  }
}
BENCHMARK(BM_ScanRow)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)
    ->Iterations(1);

BENCHMARK_MAIN();

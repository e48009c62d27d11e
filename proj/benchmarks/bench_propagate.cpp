#include <benchmark/benchmark.h>

#include "thzorient/ensemble_run.hpp"
#include "thzorient/propagate.hpp"
#include "thzorient/units.hpp"

using namespace thzo;

namespace {

PulseShape reduced_pulse(const char* name, double T_K, double* T_tilde) {
  const auto mol = find_molecule(name);
  const ReducedParams rp = to_reduced(*mol, default_field(), T_K);
  *T_tilde = rp.temperature;
  return PulseShape{rp.amplitude, rp.frequency, rp.duration};
}

}  // namespace

// Single ground-state trajectory through the pulse, per molecule.
static void BM_GroundStatePulse(benchmark::State& state,
                                const char* molecule) {
  double T_tilde = 0.0;
  const PulseShape pulse = reduced_pulse(molecule, 0.0, &T_tilde);
  PropagationConfig cfg;
  cfg.trace_samples = 0;
  const RotorState init = RotorState::basis_state({0, 0}, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_pulse(init, pulse, cfg));
  }
}
BENCHMARK_CAPTURE(BM_GroundStatePulse, OCS, "OCS");
BENCHMARK_CAPTURE(BM_GroundStatePulse, CO, "CO");
BENCHMARK_CAPTURE(BM_GroundStatePulse, LiCl, "LiCl");

// Full thermal ensemble at temperature; the scan-cell workload.
static void BM_ThermalEnsemble(benchmark::State& state, const char* molecule,
                               double T_K) {
  double T_tilde = 0.0;
  const PulseShape pulse = reduced_pulse(molecule, T_K, &T_tilde);
  PropagationConfig cfg;
  cfg.trace_samples = 0;
  for (auto _ : state) {
    const EnsembleRunResult run = run_ensemble(pulse, T_tilde, cfg, 1);
    benchmark::DoNotOptimize(run.max_post_pulse(Component::total));
  }
  double members = 0.0;
  {
    const EnsembleRunResult run = run_ensemble(pulse, T_tilde, cfg, 1);
    members = static_cast<double>(run.ensemble.members.size());
  }
  state.counters["members"] = members;
}
BENCHMARK_CAPTURE(BM_ThermalEnsemble, CO_10K, "CO", 10.0)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ThermalEnsemble, LiCl_50K, "LiCl", 50.0)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ThermalEnsemble, OCS_150K, "OCS", 150.0)
    ->Unit(benchmark::kMillisecond)
    ->Iterations(1);

// In-pulse trace sampling on top of the bare propagation.
static void BM_TracedEnsemble(benchmark::State& state) {
  PropagationConfig cfg;  // trace_samples = 512
  const PulseShape pulse{4.0, 2.0, 1.0};
  for (auto _ : state) {
    const EnsembleRunResult run = run_ensemble(pulse, 50.0, cfg, 1);
    benchmark::DoNotOptimize(run.pulse_total.back());
  }
}
BENCHMARK(BM_TracedEnsemble)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

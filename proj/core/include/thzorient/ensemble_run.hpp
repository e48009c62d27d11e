#pragma once

#include <complex>
#include <vector>

#include "thzorient/field.hpp"
#include "thzorient/propagate.hpp"
#include "thzorient/thermal.hpp"

namespace thzo {

// Which part of the thermal average: all members, the (0,0) member only, or
// everything with J0 >= 1.
enum class Component { total, zero_T, thermal };

// Thermal-averaged <cos(theta)>(tau). Reported times put the pulse switch-off
// at tau = 0: the field is on for tau in [-D, 0].
struct OrientationTrace {
  std::vector<double> times;
  std::vector<double> total;
  std::vector<double> zero_T;
  std::vector<double> thermal;
  std::size_t pulse_end = 0;  // index of the last in-pulse sample
};

struct OrientationExtremum {
  double value = 0.0;      // signed <cos> at the extremum
  double magnitude = 0.0;  // |value|
  double tau = 0.0;        // time of the extremum, pulse end = 0
};

// All ensemble members propagated through one pulse. Post-pulse dynamics is
// exact free evolution, fully captured by the thermal-summed J,J+1 coherences
// Q_J: component(tau) = sum_J 2 Re(Q_J exp(-i 2(J+1) tau)).
struct EnsembleRunResult {
  PulseShape pulse;
  ThermalEnsemble ensemble;

  std::vector<std::complex<double>> Q_total;  // index = J
  std::vector<std::complex<double>> Q_zero;
  std::vector<std::complex<double>> Q_thermal;

  // In-pulse component traces, trace_samples+1 points (empty when disabled).
  std::vector<double> pulse_total;
  std::vector<double> pulse_zero;
  std::vector<double> pulse_thermal;

  double max_norm_drift = 0.0;
  int max_Jmax = 0;

  // Component value at tau >= 0 after the pulse.
  double evaluate(Component c, double tau) const;

  // Dense post-pulse sampling over one rotational period [0, pi) plus local
  // refinement of the |<cos>| extremum down to dtau <= 1e-6.
  OrientationExtremum max_post_pulse(Component c, int dense_samples = 2048) const;

  // Combined in-pulse + post-pulse trace; post-pulse sampled uniformly with
  // `post_samples` points over [0, post_length).
  OrientationTrace trace(int post_samples, double post_length) const;
};

// Builds the Boltzmann ensemble at T_tilde and propagates every member
// through the pulse. Members are fanned out over `workers` threads grouped by
// M0 (states sharing a ladder are integrated together); the reduction into
// Q vectors and traces runs in fixed (J0, M0) order, so results are bitwise
// independent of scheduling.
EnsembleRunResult run_ensemble(const PulseShape& pulse, double T_tilde,
                               const PropagationConfig& cfg, int workers = 1,
                               double cutoff = 1e-6);

}  // namespace thzo

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "thzorient/field.hpp"
#include "thzorient/rotor.hpp"

namespace thzo {

// Time-step control for the pulse integrator. The scheme is a 4th-order
// commutator-free exponential integrator (two Gauss-node exponentials per
// step), each exponential applied by a Chebyshev expansion truncated at
// machine precision, so unitarity holds to rounding and no renormalization is
// ever applied.
struct PropagationConfig {
  double samples_per_period = 64.0;  // carrier resolution, >= 64
  int min_pulse_steps = 256;         // envelope resolution floor
  double norm_tolerance = 1e-8;      // allowed |norm - 1| drift over the pulse
  int trace_samples = 512;           // in-pulse <cos> samples; 0 disables
  int max_basis_retries = 5;         // headroom doublings before giving up
  int basis_headroom_override = 0;   // 0 = automatic truncation policy
};

struct IntegrationError : std::runtime_error {
  double drift;
  explicit IntegrationError(double d)
      : std::runtime_error("norm drift " + std::to_string(d) +
                           " exceeds tolerance"),
        drift(d) {}
};

struct BasisEscapeError : std::runtime_error {
  int Jmax;
  double top_population;
  BasisEscapeError(int jmax, double pop)
      : std::runtime_error("population " + std::to_string(pop) +
                           " reached the top of the J ladder (Jmax = " +
                           std::to_string(jmax) + ")"),
        Jmax(jmax),
        top_population(pop) {}
};

// Truncation headroom above the highest initial J0: the field climbs of order
// sqrt(A) levels and the carrier can reach lines up to ~2*pi*F*D.
int basis_headroom(const PulseShape& pulse);

// Number of integrator steps across the pulse (a multiple of trace_samples
// when tracing is enabled, so sample times subdivide steps exactly).
int pulse_step_count(const PulseShape& pulse, const PropagationConfig& cfg);

// Result of propagating a block of basis states |J0, M> sharing one ladder.
struct BlockResult {
  Eigen::MatrixXcd final_amplitudes;       // one column per initial J0
  Eigen::MatrixXd pulse_trace;             // (trace_samples+1) x ncols
  std::vector<double> norm_drift;          // per column, |norm - 1|
  double max_top_population = 0.0;         // top two ladder levels, any sample
};

// Integrate i d/dtau psi = [J^2 - cos(theta) A f(tau)] psi over the pulse
// support [-D/2, +D/2] for every listed initial J0 at fixed M.
BlockResult propagate_block(const RotorOperators& ops,
                            const std::vector<int>& initial_J0,
                            const PulseShape& pulse,
                            const PropagationConfig& cfg);

// Single-state version with the automatic truncation policy: picks Jmax,
// retries with doubled headroom while population reaches the ladder top, and
// enforces the norm tolerance.
RotorState propagate_pulse(const RotorState& initial, const PulseShape& pulse,
                           const PropagationConfig& cfg);

// Exact field-free evolution: a_J *= exp(-i J(J+1) dtau).
RotorState free_evolve(const RotorState& state, double dtau);

}  // namespace thzo

#pragma once

#include <vector>

#include "thzorient/thermal.hpp"

namespace thzo {

// Zero-area pulse A * cos^2(pi*tau/D) * sin(2*pi*F*tau), supported on
// [-D/2, +D/2]. The waveform is odd in tau, so its time integral vanishes for
// every (F, D).
struct PulseShape {
  double amplitude = 0.0;  // A >= 0
  double frequency = 0.0;  // F > 0
  double duration = 0.0;   // D > 0
};

void validate(const PulseShape& pulse);

// Field value A*f(tau); exactly zero outside the support.
double waveform(const PulseShape& pulse, double tau);

// Numerically integrated pulse area (Simpson rule over the support).
double pulse_area(const PulseShape& pulse, int samples = 200000);

struct FrequencyGrid {
  double nu_max = 0.0;      // grid covers [0, nu_max]
  double resolution = 0.0;  // grid spacing
};

// Magnitude of the continuous Fourier transform |E(nu)| on a uniform grid of
// ordinary (cycles per reduced time) frequencies nu >= 0. The rotational lines
// live at angular frequencies omega_J = 2(J+1), i.e. at nu = (J+1)/pi on this
// axis.
struct FieldSpectrum {
  std::vector<double> frequencies;
  std::vector<double> magnitudes;
  double resolution = 0.0;

  double magnitude_at(double nu) const;  // linear interpolation
  double peak_frequency() const;
  double peak_magnitude() const;
};

// Default grid for a pulse: spacing 1/(40 D), covering [0, F + 10/D].
FrequencyGrid default_grid(const PulseShape& pulse);

FieldSpectrum spectrum(const PulseShape& pulse, const FrequencyGrid& grid);

// |E(nu)| at a single frequency, computed by direct quadrature of the Fourier
// integral (no grid, no interpolation).
double fourier_magnitude(const PulseShape& pulse, double nu);

// One rotational line omega_J = 2(J+1), weighted by the average of the
// neighbouring initial thermal populations P = (c_J + c_{J+1})/2.
struct OverlapLine {
  int J = 0;
  double omega = 0.0;
  double population = 0.0;  // P in (0, 1]
  double magnitude = 0.0;   // |E(omega/2pi)|
};

struct OverlapReport {
  std::vector<OverlapLine> lines;  // sorted by J
  double score = 0.0;              // sum_J P_J * magnitude_J
};

// Diagnostic for the necessary condition "field spectrum overlaps the
// populated rotational lines".
OverlapReport overlap_report(const PulseShape& pulse,
                             const ThermalEnsemble& ensemble, int Jmax_lines);

}  // namespace thzo

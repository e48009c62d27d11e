#include "thzorient/field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "thzorient/constants.hpp"
#include "thzorient/fft.hpp"

namespace thzo {

using constants::pi;

void validate(const PulseShape& pulse) {
  if (!(pulse.amplitude >= 0.0)) throw std::invalid_argument("A must be >= 0");
  if (!(pulse.frequency > 0.0)) throw std::invalid_argument("F must be > 0");
  if (!(pulse.duration > 0.0)) throw std::invalid_argument("D must be > 0");
}

double waveform(const PulseShape& pulse, double tau) {
  validate(pulse);
  if (std::abs(tau) >= pulse.duration / 2.0) return 0.0;
  const double envelope = std::cos(pi * tau / pulse.duration);
  return pulse.amplitude * envelope * envelope *
         std::sin(2.0 * pi * pulse.frequency * tau);
}

double pulse_area(const PulseShape& pulse, int samples) {
  validate(pulse);
  if (samples < 1000) {
    throw std::invalid_argument("pulse_area: need at least 1000 samples");
  }
  int n = samples;
  if (n % 2 != 0) ++n;  // Simpson needs an even interval count
  const double h = pulse.duration / n;
  double sum = 0.0;
  for (int k = 1; k < n; ++k) {
    const double tau = -pulse.duration / 2.0 + k * h;
    sum += (k % 2 == 1 ? 4.0 : 2.0) * waveform(pulse, tau);
  }
  // Endpoints vanish with the envelope.
  return sum * h / 3.0;
}

namespace {

struct SampledPulse {
  std::vector<double> values;  // waveform at midpoints
  double dt = 0.0;
  double t0 = 0.0;  // first sample time
};

// Midpoint sampling, symmetric about tau = 0, resolving both the carrier and
// the envelope. nu_need bounds the largest frequency that must stay well below
// Nyquist.
SampledPulse sample_pulse(const PulseShape& pulse, double nu_need) {
  const double D = pulse.duration;
  double dt = std::min(1.0 / (128.0 * pulse.frequency), D / 4096.0);
  if (nu_need > 0.0) dt = std::min(dt, 1.0 / (8.0 * nu_need));
  std::size_t n = static_cast<std::size_t>(std::ceil(D / dt));
  if (n % 2 != 0) ++n;
  SampledPulse s;
  s.dt = D / static_cast<double>(n);
  s.t0 = -D / 2.0 + s.dt / 2.0;
  s.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.values[k] = waveform(pulse, s.t0 + static_cast<double>(k) * s.dt);
  }
  return s;
}

}  // namespace

double FieldSpectrum::magnitude_at(double nu) const {
  if (frequencies.empty()) return 0.0;
  if (nu <= frequencies.front()) return magnitudes.front();
  if (nu >= frequencies.back()) return magnitudes.back();
  const double pos = (nu - frequencies.front()) / resolution;
  const std::size_t i =
      std::min(static_cast<std::size_t>(pos), frequencies.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return magnitudes[i] * (1.0 - frac) + magnitudes[i + 1] * frac;
}

double FieldSpectrum::peak_frequency() const {
  const auto it = std::max_element(magnitudes.begin(), magnitudes.end());
  return frequencies[static_cast<std::size_t>(it - magnitudes.begin())];
}

double FieldSpectrum::peak_magnitude() const {
  return *std::max_element(magnitudes.begin(), magnitudes.end());
}

FrequencyGrid default_grid(const PulseShape& pulse) {
  return FrequencyGrid{pulse.frequency + 10.0 / pulse.duration,
                       1.0 / (40.0 * pulse.duration)};
}

FieldSpectrum spectrum(const PulseShape& pulse, const FrequencyGrid& grid) {
  validate(pulse);
  if (!(grid.resolution > 0.0)) {
    throw std::invalid_argument("spectrum: grid resolution must be > 0");
  }
  if (grid.resolution > 1.0 / (20.0 * pulse.duration)) {
    throw std::invalid_argument(
        "spectrum: grid too coarse, need resolution <= 1/(20 D)");
  }
  const double nu_max =
      std::max(grid.nu_max, pulse.frequency + 10.0 / pulse.duration);

  const SampledPulse s = sample_pulse(pulse, nu_max);

  // Zero-pad so that FFT bins are at least 16x finer than the requested grid;
  // linear interpolation onto the grid is then negligible against the peak.
  const std::size_t n_min = static_cast<std::size_t>(
      std::ceil(1.0 / (0.0625 * grid.resolution * s.dt)));
  const std::size_t nfft = next_pow2(std::max(s.values.size(), n_min));

  std::vector<std::complex<double>> buf(nfft, 0.0);
  for (std::size_t k = 0; k < s.values.size(); ++k) buf[k] = s.values[k];
  fft_pow2(buf);

  const double dnu_bin = 1.0 / (static_cast<double>(nfft) * s.dt);
  const std::size_t n_bins = std::min(
      nfft / 2, static_cast<std::size_t>(std::floor(nu_max / dnu_bin)) + 2);
  std::vector<double> bin_mag(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j) {
    // Continuous-transform phase for midpoint samples starting at t0.
    bin_mag[j] = std::abs(buf[j]) * s.dt;
  }

  FieldSpectrum out;
  out.resolution = grid.resolution;
  const std::size_t n_out =
      static_cast<std::size_t>(std::floor(nu_max / grid.resolution)) + 1;
  out.frequencies.resize(n_out);
  out.magnitudes.resize(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double nu = static_cast<double>(i) * grid.resolution;
    out.frequencies[i] = nu;
    const double pos = nu / dnu_bin;
    const std::size_t j =
        std::min(static_cast<std::size_t>(pos), n_bins - 2);
    const double frac = pos - static_cast<double>(j);
    out.magnitudes[i] = bin_mag[j] * (1.0 - frac) + bin_mag[j + 1] * frac;
  }
  return out;
}

double fourier_magnitude(const PulseShape& pulse, double nu) {
  validate(pulse);
  const SampledPulse s = sample_pulse(pulse, std::abs(nu));
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const double t = s.t0 + static_cast<double>(k) * s.dt;
    const double phase = -2.0 * pi * nu * t;
    acc += s.values[k] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return std::abs(acc) * s.dt;
}

OverlapReport overlap_report(const PulseShape& pulse,
                             const ThermalEnsemble& ensemble, int Jmax_lines) {
  validate(pulse);
  if (Jmax_lines < 0) throw std::invalid_argument("Jmax_lines must be >= 0");

  OverlapReport report;
  report.lines.reserve(Jmax_lines + 1);
  for (int J = 0; J <= Jmax_lines; ++J) {
    OverlapLine line;
    line.J = J;
    line.omega = 2.0 * (J + 1);
    line.population = 0.5 * (ensemble.boltzmann_weight(J) +
                             ensemble.boltzmann_weight(J + 1));
    line.magnitude = fourier_magnitude(pulse, line.omega / (2.0 * pi));
    report.score += line.population * line.magnitude;
    report.lines.push_back(line);
  }
  return report;
}

}  // namespace thzo

#pragma once

#include <string>
#include <vector>

namespace thzo::svg {

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

// Static line chart (traces, temperature curves).
std::string line_chart(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel,
                       const std::vector<Series>& series);

// Heatmap over a rectangular grid; values in row-major order
// [i1 * len(y) + i2] with axis1 = x. NaN cells render gray.
std::string heatmap_chart(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<double>& x, bool log_x,
                          const std::vector<double>& y,
                          const std::vector<double>& values);

struct SpectrumStick {
  double omega = 0.0;
  double height = 0.0;  // population weight in [0, 1]
};

// Field spectrum (peak-normalized) over the angular-frequency axis with the
// rotational population sticks.
std::string spectrum_chart(const std::string& title,
                           const std::vector<double>& omega,
                           const std::vector<double>& magnitude,
                           const std::vector<SpectrumStick>& sticks);

}  // namespace thzo::svg

#include "thzorient/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace thzo {

std::vector<double> bessel_j_array(double x, int m) {
  if (x < 0.0 || m < 0) throw std::invalid_argument("bessel_j_array: bad args");

  std::vector<double> out(m + 1, 0.0);

  if (x < 1e-8) {
    // Leading series terms; everything beyond k=2 underflows the use cases.
    out[0] = 1.0 - 0.25 * x * x;
    if (m >= 1) out[1] = 0.5 * x;
    if (m >= 2) out[2] = 0.125 * x * x;
    return out;
  }

  // Start high enough that the assumed zero tail has decayed away.
  const int start = std::max(m, static_cast<int>(std::ceil(x))) + 60;
  std::vector<double> b(start + 2, 0.0);
  b[start + 1] = 0.0;
  b[start] = 1e-280;

  double norm = 0.0;  // accumulates b0 + 2*sum_{even k>=2} bk
  for (int k = start; k >= 1; --k) {
    b[k - 1] = (2.0 * k / x) * b[k] - b[k + 1];
    if (std::abs(b[k - 1]) > 1e250) {
      // Rescale everything computed so far to avoid overflow.
      for (int i = k - 1; i <= start + 1; ++i) b[i] *= 1e-250;
      norm *= 1e-250;
    }
    if ((k - 1) >= 2 && (k - 1) % 2 == 0) norm += 2.0 * b[k - 1];
  }
  norm += b[0];

  for (int k = 0; k <= m && k <= start; ++k) out[k] = b[k] / norm;
  return out;
}

}  // namespace thzo

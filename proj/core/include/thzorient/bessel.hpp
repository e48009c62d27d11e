#pragma once

#include <vector>

namespace thzo {

// J_0(x) .. J_m(x) for x >= 0 by Miller's downward recurrence, normalized with
// J_0 + 2*sum_k J_{2k} = 1. Accurate to ~1e-15 absolute across the range used
// by the propagator (x up to a few hundred).
std::vector<double> bessel_j_array(double x, int m);

}  // namespace thzo

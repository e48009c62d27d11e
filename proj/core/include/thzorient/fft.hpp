#pragma once

#include <complex>
#include <vector>

namespace thzo {

// In-place iterative radix-2 FFT, forward sign convention exp(-2*pi*i*jk/N).
// Size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& data);

std::size_t next_pow2(std::size_t n);

}  // namespace thzo

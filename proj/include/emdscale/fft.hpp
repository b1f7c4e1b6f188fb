#pragma once

#include <complex>
#include <vector>

namespace emdscale {

// In-place iterative radix-2 transform; size must be a power of two.
// Forward uses exp(-2*pi*i*jk/n) and no normalization; inverse divides by n.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse = false);

} // namespace emdscale

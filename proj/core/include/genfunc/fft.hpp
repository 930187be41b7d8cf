#pragma once

#include <complex>
#include <vector>

namespace genfunc {

using cplx = std::complex<double>;

/// In-place radix-2 complex FFT. sign = -1 gives the forward transform
/// X_m = sum_j x_j exp(-2*pi*i*j*m/n), sign = +1 the unnormalized inverse.
/// n must be a power of two.
void fft_inplace(std::vector<cplx>& data, int sign);

/// Row-column FFT over an n x n row-major grid (same convention as above).
void fft2_inplace(std::vector<cplx>& data, std::size_t n, int sign);

bool is_power_of_two(std::size_t n);

}  // namespace genfunc

#include "genfunc/fft.hpp"

#include <cmath>  // IWYU pragma: keep
#include <numbers>
#include <stdexcept>

namespace genfunc {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

void fft_inplace(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang =
            sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void fft2_inplace(std::vector<cplx>& data, std::size_t n, int sign) {
    if (data.size() != n * n)
        throw std::invalid_argument("fft2: data size != n*n");
    std::vector<cplx> scratch(n);
    // Rows (contiguous).
    for (std::size_t r = 0; r < n; ++r) {
        scratch.assign(data.begin() + static_cast<std::ptrdiff_t>(r * n),
                       data.begin() + static_cast<std::ptrdiff_t>((r + 1) * n));
        fft_inplace(scratch, sign);
        std::copy(scratch.begin(), scratch.end(),
                  data.begin() + static_cast<std::ptrdiff_t>(r * n));
    }
    // Columns.
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) scratch[r] = data[r * n + c];
        fft_inplace(scratch, sign);
        for (std::size_t r = 0; r < n; ++r) data[r * n + c] = scratch[r];
    }
}

}  // namespace genfunc

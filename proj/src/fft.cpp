#include "emdscale/fft.hpp"

#include <cmath>
#include <numbers>

#include "emdscale/errors.hpp"

namespace emdscale {

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ArgumentError("fft_inplace: size must be a nonzero power of two");
    }
    if (n == 1) {
        return;
    }

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }

    const double sign = inverse ? 2.0 : -2.0;
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = sign * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n);
        twiddle[k] = std::polar(1.0, angle);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t block = 0; block < n; block += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = twiddle[k * stride];
                std::complex<double>& u = data[block + k];
                std::complex<double>& v = data[block + k + len / 2];
                const std::complex<double> wv = w * v;
                v = u - wv;
                u = u + wv;
            }
        }
    }

    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& z : data) {
            z *= inv_n;
        }
    }
}

} // namespace emdscale

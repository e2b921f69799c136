#ifndef BANDEDGE_FFT_HPP
#define BANDEDGE_FFT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "bandedge/types.hpp"

namespace bandedge {

// Iterative radix-2 FFT, enough for the power-of-two pulse grids used here.
// Convention: forward = analysis with e^{-i Delta t},
//   X_k = sum_n x_n exp(-2 pi i k n / N),
// inverse carries the 1/N. A pure envelope e^{+i Delta_0 t} therefore lands
// in the bin with offset +Delta_0.

inline bool is_power_of_two(std::size_t n) { return n && ((n & (n - 1)) == 0); }

namespace detail {

inline void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: length must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

}  // namespace detail

inline std::vector<cplx> fft_forward(std::vector<cplx> x) {
    detail::fft_radix2(x, false);
    return x;
}

inline std::vector<cplx> fft_inverse(std::vector<cplx> x) {
    detail::fft_radix2(x, true);
    return x;
}

/// Angular frequency offset of bin k on an N-point grid with spacing dt,
/// wrapped to (-pi/dt, pi/dt].
inline double fft_bin_offset(std::size_t k, std::size_t n, double dt) {
    const double kk = (k <= n / 2) ? static_cast<double>(k)
                                   : static_cast<double>(k) - static_cast<double>(n);
    return 2.0 * pi * kk / (static_cast<double>(n) * dt);
}

}  // namespace bandedge

#endif

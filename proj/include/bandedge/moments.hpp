#ifndef BANDEDGE_MOMENTS_HPP
#define BANDEDGE_MOMENTS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "bandedge/complex_error.hpp"
#include "bandedge/types.hpp"

namespace bandedge {

// Exact moments of the weakly singular kernel factor tau^{-1/2} e^{-i w tau}
// over the uniform subintervals [jh, (j+1)h], used by the product-integration
// Volterra solver. With zeta = sqrt(i w) (principal branch) and
//
//     E(t) = exp(-i w t) * faddeeva_w(i zeta sqrt(t)),
//
// the antiderivative of tau^{-1/2} e^{-i w tau} is -(sqrt(pi)/zeta) E(tau);
// i zeta sqrt(t) lies in the upper half-plane for either sign of w, where
// the Faddeeva function is bounded, so differencing E values is stable
// (unlike differencing erf values, which saturate).

namespace detail {

/// int_a^b tau^{-1/2} e^{-i w tau} dtau, given precomputed E(a), E(b).
inline cplx m_half(double a, double b, double w, cplx Ea, cplx Eb) {
    if (w == 0.0) return 2.0 * (std::sqrt(b) - std::sqrt(a));
    const cplx zeta = principal_sqrt(cplx(0.0, w));
    return std::sqrt(pi) / zeta * (Ea - Eb);
}

/// int_a^b tau^{+1/2} e^{-i w tau} dtau (by parts, reusing m_half).
inline cplx m_three_half(double a, double b, double w, cplx m0) {
    if (w == 0.0) return (2.0 / 3.0) * (b * std::sqrt(b) - a * std::sqrt(a));
    const cplx iw(0.0, 1.0 / w);
    const cplx edge = std::sqrt(b) * std::exp(cplx(0.0, -w * b)) -
                      std::sqrt(a) * std::exp(cplx(0.0, -w * a));
    return iw * edge - 0.5 * iw * m0;
}

}  // namespace detail

/// Per-interval moments for intervals [jh, (j+1)h], j = 0..n-1:
///   p0[j] = int K(tau) dtau
///   p1[j] = int K(tau) (tau - jh)/h dtau        (linear interpolation weight)
/// where K(tau) = C tau^{-1/2} e^{-i w tau} with C = amp e^{-i pi/4}/sqrt(pi).
struct KernelMoments {
    std::vector<cplx> p0;
    std::vector<cplx> p1;
};

inline KernelMoments isotropic_moments(double beta, double w, double h,
                                       std::size_t n) {
    KernelMoments mom;
    mom.p0.resize(n);
    mom.p1.resize(n);
    const cplx C =
        std::pow(beta, 1.5) * std::exp(cplx(0.0, -pi / 4.0)) / std::sqrt(pi);

    // tiny |w| b: the 1/w edge terms in m_three_half cancel catastrophically;
    // expand e^{-i w tau} instead (error O((|w| b)^3) < 1e-18 at the switch)
    const double T = h * static_cast<double>(n);
    if (std::abs(w) * std::max(T, 1.0) < 1e-6) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = static_cast<double>(j) * h, b = a + h;
            auto pow_m = [&](double k) {  // int tau^{k} over [a,b]
                return (std::pow(b, k + 1.0) - std::pow(a, k + 1.0)) / (k + 1.0);
            };
            const cplx iw(0.0, -w);
            const cplx m0 = pow_m(-0.5) + iw * pow_m(0.5) +
                            0.5 * iw * iw * pow_m(1.5);
            const cplx m1 = pow_m(0.5) + iw * pow_m(1.5) +
                            0.5 * iw * iw * pow_m(2.5);
            mom.p0[j] = C * m0;
            mom.p1[j] = C * (m1 - a * m0) / h;
        }
        return mom;
    }

    const cplx zeta = principal_sqrt(cplx(0.0, w));
    std::vector<cplx> E(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double t = static_cast<double>(j) * h;
        E[j] = std::exp(cplx(0.0, -w * t)) *
               faddeeva_w(cplx(0.0, 1.0) * zeta * std::sqrt(t));
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double a = static_cast<double>(j) * h, b = a + h;
        const cplx m0 = detail::m_half(a, b, w, E[j], E[j + 1]);
        const cplx m1 = detail::m_three_half(a, b, w, m0);
        mom.p0[j] = C * m0;
        mom.p1[j] = C * (m1 - a * m0) / h;
    }
    return mom;
}

}  // namespace bandedge

#endif

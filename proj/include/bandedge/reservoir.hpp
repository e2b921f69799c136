#ifndef BANDEDGE_RESERVOIR_HPP
#define BANDEDGE_RESERVOIR_HPP

#include <cmath>
#include <span>
#include <vector>

#include "bandedge/types.hpp"

namespace bandedge {

// Memory kernels K(tau) of the three reservoirs and their Laplace
// transforms Ktilde(s). Everything depends on the probe detuning only
// through Delta = delta_g - delta (the rotating frame absorbs delta into
// the kernel phase).

inline double band_edge_offset(const ReservoirModel& m, const SystemParams& p) {
    (void)m;
    return p.delta_g - p.delta;
}

/// Time-domain kernel K(tau), tau > 0.
///
/// Isotropic:   beta^{3/2} exp(-i[pi/4 + Delta tau]) / sqrt(pi tau)
/// Anisotropic: beta_a^{1/2} exp(+i[pi/4 - Delta tau]) / (sqrt(pi) tau^{3/2})
/// Markovian:   delta distribution (gamma1/2) delta(tau); no pointwise
///              value, use ktilde().
inline cplx kernel(const ReservoirModel& m, const SystemParams& p, double tau) {
    if (!(tau > 0.0))
        throw NonPositiveTauError("kernel: tau must be > 0 (singular at 0)");
    const double Delta = band_edge_offset(m, p);
    switch (m.kind) {
        case ReservoirKind::Markovian:
            throw MarkovianKernelNotPointwiseError(
                "kernel: Markovian kernel is a delta distribution; use ktilde");
        case ReservoirKind::IsotropicPBG: {
            const double amp = std::pow(p.beta, 1.5) / std::sqrt(pi * tau);
            return amp * std::exp(cplx(0.0, -(pi / 4.0 + Delta * tau)));
        }
        case ReservoirKind::AnisotropicPBG: {
            const double amp =
                std::sqrt(p.beta_a) / (std::sqrt(pi) * tau * std::sqrt(tau));
            return amp * std::exp(cplx(0.0, pi / 4.0 - Delta * tau));
        }
    }
    throw std::logic_error("kernel: unreachable");
}

/// Anisotropic transform constant c_a in Ktilde_a(s) = c_a sqrt(s + i Delta).
///
/// The magnitude 2 beta_a^{1/2} comes from the finite-part transform of the
/// tau^{-3/2} kernel; the sign is fixed by passivity (Re Ktilde_a(0) >= 0
/// above threshold, so absorption stays nonnegative). The asymptotic kernel
/// determines the constant only up to this normalization, hence the
/// overridable scale.
inline cplx aniso_transform_constant(const SystemParams& p) {
    return p.aniso_transform_scale * 2.0 * std::sqrt(p.beta_a) *
           std::exp(cplx(0.0, pi / 4.0));
}

/// Laplace transform Ktilde(s), Re s >= 0, principal branch.
///
/// Isotropic:   beta^{3/2} e^{-i pi/4} / sqrt(s + i Delta)
/// Markovian:   gamma1 / 2
/// Anisotropic: c_a sqrt(s + i Delta)
inline cplx ktilde(const ReservoirModel& m, const SystemParams& p, cplx s) {
    const double Delta = band_edge_offset(m, p);
    const cplx shifted = s + cplx(0.0, Delta);
    switch (m.kind) {
        case ReservoirKind::Markovian:
            return cplx(0.5 * p.gamma1, 0.0);
        case ReservoirKind::IsotropicPBG: {
            if (shifted == cplx(0.0))
                throw BranchPointSingularityError(
                    "ktilde: s = -i(delta_g - delta) is the branch point; "
                    "|Ktilde| diverges there");
            return std::pow(p.beta, 1.5) * std::exp(cplx(0.0, -pi / 4.0)) /
                   principal_sqrt(shifted);
        }
        case ReservoirKind::AnisotropicPBG:
            return aniso_transform_constant(p) * principal_sqrt(shifted);
    }
    throw std::logic_error("ktilde: unreachable");
}

/// Ktilde in the limit s -> 0+ (approached from Re s > 0), needed by the
/// steady state. The isotropic transform diverges at delta = delta_g; that
/// case is reported as finite == false rather than as an overflowing value.
struct KtildeZeroLimit {
    bool finite = true;
    cplx value{0.0, 0.0};
};

inline KtildeZeroLimit ktilde_zero_limit(const ReservoirModel& m,
                                         const SystemParams& p) {
    const double Delta = band_edge_offset(m, p);
    switch (m.kind) {
        case ReservoirKind::Markovian:
            return {true, cplx(0.5 * p.gamma1, 0.0)};
        case ReservoirKind::IsotropicPBG: {
            if (Delta == 0.0) return {false, cplx(0.0, 0.0)};
            const double b32 = std::pow(p.beta, 1.5);
            // principal sqrt(i Delta): e^{+i pi/4} sqrt(Delta) for Delta > 0,
            // e^{-i pi/4} sqrt(|Delta|) for Delta < 0
            if (Delta > 0.0)
                return {true, cplx(0.0, -b32 / std::sqrt(Delta))};
            return {true, cplx(b32 / std::sqrt(-Delta), 0.0)};
        }
        case ReservoirKind::AnisotropicPBG: {
            const cplx root = principal_sqrt(cplx(0.0, Delta));
            return {true, aniso_transform_constant(p) * root};
        }
    }
    throw std::logic_error("ktilde_zero_limit: unreachable");
}

// ---------------------------------------------------------------------------
// Numerical check that the pointwise kernel and the closed-form transform
// are a Laplace pair. The tau^{-1/2} endpoint singularity is removed by
// tau = u^2; the resulting integrand 2 C exp(-(s + i Delta) u^2) is smooth
// and is integrated by composite Simpson with doubling until converged.
// ---------------------------------------------------------------------------

struct QuadratureOptions {
    double rel_tol = 1e-10;
    int max_doublings = 14;  ///< starting from 64 panels
};

namespace detail {

inline cplx kernel_transform_quadrature(const SystemParams& p, double Delta,
                                        cplx s, const QuadratureOptions& opt) {
    if (!(s.real() > 0.0))
        throw std::invalid_argument(
            "validate_laplace_pair: quadrature needs Re s > 0");
    const cplx z = s + cplx(0.0, Delta);
    const cplx C = std::pow(p.beta, 1.5) * std::exp(cplx(0.0, -pi / 4.0)) /
                   std::sqrt(pi);
    // truncate where |exp(-Re z u^2)| < 1e-18
    const double U = std::sqrt(42.0 / z.real());
    auto f = [&](double u) { return 2.0 * C * std::exp(-z * u * u); };

    auto simpson = [&](int n) {
        const double du = U / n;
        cplx acc = f(0.0) + f(U);
        for (int i = 1; i < n; i += 2) acc += 4.0 * f(i * du);
        for (int i = 2; i < n; i += 2) acc += 2.0 * f(i * du);
        return acc * (du / 3.0);
    };

    int n = 64;
    cplx prev = simpson(n);
    for (int it = 0; it < opt.max_doublings; ++it) {
        n *= 2;
        const cplx cur = simpson(n);
        if (std::abs(cur - prev) <= opt.rel_tol * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    throw QuadratureNonConvergenceError(
        "validate_laplace_pair: Simpson refinement did not converge");
}

}  // namespace detail

/// Max modulus error between the quadrature transform of the kernel and the
/// closed-form ktilde over the given s grid (Re s > 0 required).
/// Markovian is excluded from quadrature by convention and returns 0; the
/// anisotropic pointwise kernel is not integrable at 0 and is rejected.
inline double validate_laplace_pair(const ReservoirModel& m,
                                    const SystemParams& p,
                                    std::span<const cplx> s_grid,
                                    const QuadratureOptions& opt = {}) {
    if (m.kind == ReservoirKind::Markovian) return 0.0;
    if (m.kind == ReservoirKind::AnisotropicPBG)
        throw UnsupportedModelError(
            "validate_laplace_pair: anisotropic kernel is non-integrable at "
            "tau = 0; transform-domain only");
    const double Delta = band_edge_offset(m, p);
    double worst = 0.0;
    for (const cplx s : s_grid) {
        const cplx q = detail::kernel_transform_quadrature(p, Delta, s, opt);
        worst = std::max(worst, std::abs(q - ktilde(m, p, s)));
    }
    return worst;
}

}  // namespace bandedge

#endif

#ifndef BANDEDGE_SPECTRA_HPP
#define BANDEDGE_SPECTRA_HPP

#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "bandedge/reservoir.hpp"
#include "bandedge/types.hpp"

namespace bandedge {

// ---------------------------------------------------------------------------
// Steady state and susceptibility.
// ---------------------------------------------------------------------------

/// Steady-state denominator B(0) = delta + i gamma/2 + i Ktilde(0+).
/// Not meaningful for the isotropic model at delta = delta_g, where
/// |Ktilde| diverges and the steady amplitude is exactly zero.
inline cplx steady_denominator(const ReservoirModel& m, const SystemParams& p) {
    const auto k0 = ktilde_zero_limit(m, p);
    return cplx(p.delta, 0.5 * p.gamma) + cplx(0.0, 1.0) * k0.value;
}

/// Long-time amplitude a1(inf) = Omega / (delta + i gamma/2 + i Ktilde(0+))
/// from the final-value theorem. Requires gamma > 0 (otherwise the
/// transform denominator can have purely imaginary roots and no limit
/// exists). At the isotropic threshold the limit is taken analytically:
/// a1(inf) = 0 exactly.
inline cplx a1_steady(const ReservoirModel& m, const SystemParams& p) {
    if (!(p.gamma > 0.0))
        throw GammaZeroSteadyStateError(
            "a1_steady: final-value theorem needs gamma > 0");
    if (p.omega_rabi == 0.0) return {0.0, 0.0};
    const auto k0 = ktilde_zero_limit(m, p);
    if (!k0.finite) return {0.0, 0.0};
    return p.omega_rabi / steady_denominator(m, p);
}

struct SusceptibilitySample {
    double delta = 0.0;
    cplx chi{0.0, 0.0};
    double absorption() const { return -chi.imag(); }
    double dispersion() const { return chi.real(); }
};

namespace detail {

/// The isotropic chi in its exact two-branch form; zero at the threshold.
inline cplx chi_isotropic(double delta, double delta_g, double gamma,
                          double beta) {
    const double b32 = std::pow(beta, 1.5);
    if (delta <= delta_g) {
        const double u = std::sqrt(delta_g - delta);
        return -u / (cplx(delta, -0.5 * gamma) * u + b32);
    }
    const double v = std::sqrt(delta - delta_g);
    return -v / (cplx(delta, -0.5 * gamma) * v - cplx(0.0, b32));
}

}  // namespace detail

/// Normalized linear susceptibility chi = -prefactor * conj(a1(inf)) / Omega.
/// For the isotropic model this reduces to the exact piecewise closed form,
/// continuous through chi(delta_g) = 0.
inline SusceptibilitySample susceptibility(const ReservoirModel& m,
                                           const SystemParams& p,
                                           const ScalingParams& sc = {}) {
    if (!(p.gamma > 0.0))
        throw GammaZeroSteadyStateError(
            "susceptibility: steady state needs gamma > 0");
    SusceptibilitySample out;
    out.delta = p.delta;
    if (m.kind == ReservoirKind::IsotropicPBG) {
        out.chi = sc.chi_prefactor *
                  detail::chi_isotropic(p.delta, p.delta_g, p.gamma, p.beta);
        return out;
    }
    // Markovian / anisotropic: Ktilde(0) is finite, use the generic form.
    out.chi = -sc.chi_prefactor / std::conj(steady_denominator(m, p));
    return out;
}

// ---------------------------------------------------------------------------
// Derivative of chi with respect to the probe detuning (analytic).
// Finite differences blow up near the isotropic threshold where the
// derivative itself diverges like (delta_g - delta)^{-1/2}; the closed-form
// branch derivatives stay accurate arbitrarily close to it.
// ---------------------------------------------------------------------------

inline cplx dchi_ddelta(const ReservoirModel& m, const SystemParams& p,
                        const ScalingParams& sc = {}) {
    if (!(p.gamma > 0.0))
        throw GammaZeroSteadyStateError("dchi_ddelta: needs gamma > 0");
    const cplx dmg(p.delta, -0.5 * p.gamma);
    switch (m.kind) {
        case ReservoirKind::Markovian: {
            // chi = -P/(delta - i(gamma+gamma1)/2)
            const cplx den(p.delta, -0.5 * (p.gamma + p.gamma1));
            return sc.chi_prefactor / (den * den);
        }
        case ReservoirKind::IsotropicPBG: {
            const double b32 = std::pow(p.beta, 1.5);
            if (p.delta == p.delta_g)
                throw BranchPointSingularityError(
                    "dchi_ddelta: derivative diverges at delta = delta_g");
            if (p.delta < p.delta_g) {
                const double x = p.delta_g - p.delta;
                const double u = std::sqrt(x);
                const cplx D = dmg * u + b32;
                return sc.chi_prefactor * (b32 / (2.0 * u) + x) / (D * D);
            }
            const double y = p.delta - p.delta_g;
            const double v = std::sqrt(y);
            const cplx D = dmg * v - cplx(0.0, b32);
            return sc.chi_prefactor * (cplx(0.0, b32) / (2.0 * v) + y) / (D * D);
        }
        case ReservoirKind::AnisotropicPBG: {
            // chi = -P / conj(B), B(delta) = delta + i gamma/2
            //       + i c_a sqrt(i(delta_g - delta));
            // dB/ddelta = 1 + c_a / (2 sqrt(i(delta_g - delta))).
            const double Delta = p.delta_g - p.delta;
            if (Delta == 0.0)
                throw BranchPointSingularityError(
                    "dchi_ddelta: anisotropic derivative diverges at "
                    "delta = delta_g");
            const cplx root = principal_sqrt(cplx(0.0, Delta));
            const cplx ca = aniso_transform_constant(p);
            const cplx B = cplx(p.delta, 0.5 * p.gamma) + cplx(0.0, 1.0) * ca * root;
            const cplx dB = 1.0 + ca / (2.0 * root);
            return sc.chi_prefactor * std::conj(dB / (B * B));
        }
    }
    throw std::logic_error("dchi_ddelta: unreachable");
}

inline double dre_chi_ddelta(const ReservoirModel& m, const SystemParams& p,
                             const ScalingParams& sc = {}) {
    return dchi_ddelta(m, p, sc).real();
}

/// Group velocity v_g/c = 1 / (1 + (omega/2c) dRe chi/ddelta).
/// At the isotropic threshold the slope diverges; the limit v_g -> 0 is
/// reported with the divergence flag set instead of evaluating 1/inf.
struct GroupVelocity {
    double v_over_c = 1.0;
    bool threshold_divergence = false;
};

inline GroupVelocity group_velocity(const ReservoirModel& m,
                                    const SystemParams& p,
                                    const ScalingParams& sc = {}) {
    if (m.kind != ReservoirKind::Markovian && p.delta == p.delta_g)
        return {0.0, true};
    const double slope = dre_chi_ddelta(m, p, sc);
    return {1.0 / (1.0 + 0.5 * sc.omega_over_c * slope), false};
}

// ---------------------------------------------------------------------------
// Density of modes near the band edge (unnormalized), as a function of
// x = omega - omega_g.
// ---------------------------------------------------------------------------

inline double density_of_modes(const ReservoirModel& m, double x) {
    switch (m.kind) {
        case ReservoirKind::Markovian:
            return 1.0;  // flat free-space reservoir
        case ReservoirKind::IsotropicPBG:
            if (x < 0.0) return 0.0;
            if (x == 0.0) return std::numeric_limits<double>::infinity();
            return 1.0 / std::sqrt(x);
        case ReservoirKind::AnisotropicPBG:
            return x > 0.0 ? std::sqrt(x) : 0.0;
    }
    throw std::logic_error("density_of_modes: unreachable");
}

// ---------------------------------------------------------------------------
// Spectrum over a uniform detuning grid.
// ---------------------------------------------------------------------------

struct DeltaGrid {
    double min = -10.0;
    double max = 10.0;
    double step = 0.005;

    std::size_t size() const {
        if (!(step > 0.0) || max < min)
            throw std::invalid_argument("grid requires step > 0 and max >= min");
        return static_cast<std::size_t>(std::llround((max - min) / step)) + 1;
    }
    double at(std::size_t i) const { return min + static_cast<double>(i) * step; }
};

struct SpectrumTable {
    DeltaGrid grid;
    std::vector<SusceptibilitySample> samples;
};

/// Pointwise susceptibility over the grid. The evaluation is a pure
/// function of delta, so the grid is chunked across threads; assembly is
/// by index, independent of completion order.
inline SpectrumTable spectrum(const ReservoirModel& m, const SystemParams& p,
                              const ScalingParams& sc, const DeltaGrid& grid,
                              unsigned max_threads = 0) {
    const std::size_t n = grid.size();
    SpectrumTable table{grid, std::vector<SusceptibilitySample>(n)};
    unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned nthreads =
        static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(n / 512, 1)));
    auto worker = [&](std::size_t lo, std::size_t hi) {
        SystemParams local = p;
        for (std::size_t i = lo; i < hi; ++i) {
            local.delta = grid.at(i);
            table.samples[i] = susceptibility(m, local, sc);
        }
    };
    if (nthreads <= 1) {
        worker(0, n);
        return table;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
    return table;
}

}  // namespace bandedge

#endif

#ifndef BANDEDGE_VOLTERRA_HPP
#define BANDEDGE_VOLTERRA_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "bandedge/moments.hpp"
#include "bandedge/reservoir.hpp"
#include "bandedge/types.hpp"

namespace bandedge {

// Time-domain integration of the coupled amplitude equations
//
//   da0/dt = -i Omega a1
//   da1/dt = -i Omega a0 + (i delta - gamma/2) a1 - int_0^t K(t-t') a1(t') dt'
//
// for the slowly varying amplitudes (the fast phase e^{-i delta t} of the
// upper level is already factored out; the kernel carries the detuning
// through Delta = delta_g - delta only). Initial state: a0 = 1, a1 = 0.
//
// The memory integral uses product integration: a1 is interpolated
// piecewise-constant (order 1) or piecewise-linear (order 2) on the grid
// and the singular factor tau^{-1/2} e^{-i Delta tau} is integrated exactly
// per subinterval (moments.hpp). The ODE part is advanced by the trapezoid
// rule; the newest-interval moment makes each step implicit, which costs a
// scalar (perturbative) or 2x2 (coupled) linear solve.

enum class SolveMode { Perturbative, Coupled };

struct SolverConfig {
    double step = 0.01;          ///< grid spacing h (units of 1/beta)
    double horizon = 50.0;       ///< final time T
    int scheme_order = 2;        ///< memory interpolant order, 1 or 2
    int talbot_nodes = 64;       ///< M for the inverse-Laplace contour
    double contour_scale = 1.0;  ///< multiplier on the Talbot radius

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
        if (horizon < step) throw std::invalid_argument("horizon must be >= step");
        if (scheme_order != 1 && scheme_order != 2)
            throw std::invalid_argument("scheme_order must be 1 or 2");
        if (talbot_nodes < 16)
            throw std::invalid_argument("talbot_nodes must be >= 16");
        if (!(contour_scale > 0.0))
            throw std::invalid_argument("contour_scale must be > 0");
    }
};

struct Trajectory {
    double step = 0.0;
    SolveMode mode = SolveMode::Perturbative;
    std::vector<cplx> a0;
    std::vector<cplx> a1;

    std::size_t size() const { return a1.size(); }
    double time(std::size_t i) const { return static_cast<double>(i) * step; }
};

inline Trajectory solve_volterra(const ReservoirModel& m, const SystemParams& p,
                                 const SolverConfig& cfg,
                                 SolveMode mode = SolveMode::Perturbative) {
    cfg.validate();
    m.validate(p);
    if (m.kind == ReservoirKind::AnisotropicPBG)
        throw UnsupportedModelError(
            "solve_volterra: anisotropic kernel is non-integrable at tau = 0; "
            "transform-domain methods only");

    const double h = cfg.step;
    const double Delta = band_edge_offset(m, p);
    const double rate =
        0.5 * p.gamma + std::abs(p.delta) + p.omega_rabi + std::abs(Delta) +
        (m.kind == ReservoirKind::Markovian ? 0.5 * p.gamma1 : 0.0);
    if (h * rate > 0.75)
        throw StepTooLargeError(
            "solve_volterra: h * (gamma/2 + |delta| + Omega + |delta_g - "
            "delta|) > 0.75; reduce the step");

    const std::size_t n = static_cast<std::size_t>(std::llround(cfg.horizon / h));
    cplx pcoef(-0.5 * p.gamma, p.delta);
    KernelMoments mom;
    if (m.kind == ReservoirKind::IsotropicPBG) {
        mom = isotropic_moments(p.beta, Delta, h, n);
    } else {
        // Markovian: the delta-kernel convolution is (gamma1/2) a1(t);
        // fold it into the local coefficient, memory weights stay zero.
        pcoef -= 0.5 * p.gamma1;
        mom.p0.assign(n, cplx(0.0));
        mom.p1.assign(n, cplx(0.0));
    }

    Trajectory tr;
    tr.step = h;
    tr.mode = mode;
    tr.a0.assign(n + 1, cplx(1.0));
    tr.a1.assign(n + 1, cplx(0.0));
    auto& a0 = tr.a0;
    auto& a1 = tr.a1;

    const cplx iOm(0.0, p.omega_rabi);
    cplx mem_prev(0.0);  // memory integral at the previous grid point

    for (std::size_t m_step = 1; m_step <= n; ++m_step) {
        // startup uses the order-1 moment rule (single-interval history)
        const int oe = (cfg.scheme_order == 1 || m_step == 1) ? 1 : 2;
        const cplx w_self = (oe == 1) ? mom.p0[0] : (mom.p0[0] - mom.p1[0]);

        cplx hist(0.0);
        if (m_step > 1) {
            if (oe == 1) {
                for (std::size_t j = 1; j < m_step; ++j)
                    hist += mom.p0[j] * a1[m_step - j];
            } else {
                for (std::size_t j = 1; j < m_step; ++j)
                    hist += a1[m_step - j] * (mom.p0[j] - mom.p1[j]) +
                            a1[m_step - j - 1] * mom.p1[j];
                hist += a1[m_step - 1] * mom.p1[0];
            }
        }

        const cplx f_prev = -iOm * a0[m_step - 1] + pcoef * a1[m_step - 1] - mem_prev;
        if (mode == SolveMode::Coupled) {
            // [ 1          i Om h/2                ] [a0] = [a0' - (h/2) i Om a1']
            // [ i Om h/2   1 - h p/2 + h w_self/2  ] [a1]   [a1' + (h/2)(f' - hist)]
            const cplx A00 = 1.0, A01 = iOm * (h / 2.0);
            const cplx A10 = iOm * (h / 2.0);
            const cplx A11 = 1.0 - (h / 2.0) * pcoef + (h / 2.0) * w_self;
            const cplx r0 = a0[m_step - 1] - (h / 2.0) * iOm * a1[m_step - 1];
            const cplx r1 = a1[m_step - 1] + (h / 2.0) * f_prev - (h / 2.0) * hist;
            const cplx det = A00 * A11 - A01 * A10;
            a0[m_step] = (r0 * A11 - A01 * r1) / det;
            a1[m_step] = (A00 * r1 - A10 * r0) / det;
        } else {
            const cplx rhs = a1[m_step - 1] + (h / 2.0) * f_prev +
                             (h / 2.0) * (-iOm) - (h / 2.0) * hist;
            a1[m_step] = rhs / (1.0 - (h / 2.0) * pcoef + (h / 2.0) * w_self);
        }
        mem_prev = w_self * a1[m_step] + hist;
    }
    return tr;
}

}  // namespace bandedge

#endif

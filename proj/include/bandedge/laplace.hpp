#ifndef BANDEDGE_LAPLACE_HPP
#define BANDEDGE_LAPLACE_HPP

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "bandedge/reservoir.hpp"
#include "bandedge/spectra.hpp"
#include "bandedge/types.hpp"
#include "bandedge/volterra.hpp"

namespace bandedge {

// Numerical inversion of the perturbative transform
//
//   A1(s) = Omega / ( s [ delta + i gamma/2 + i Ktilde(s) + i s ] )
//
// A1 has a simple pole at s = 0 (the steady state), possible poles where
// the bracket B(s) vanishes on the principal sheet, and - for the isotropic
// model - a branch point at s = -i(delta_g - delta) with the cut running
// left from it. The inverter:
//
//  1. subtracts the s = 0 residue and the principal-sheet pole residues
//     (for the isotropic model the bracket zeros reduce to a cubic in
//     w = sqrt(s + i Delta); roots with Re w > 0 live on the principal
//     sheet), inverting those terms exactly as R e^{s t};
//  2. inverts the remainder, which carries only the branch cut, by the
//     fixed-Talbot rule. The contour is always shifted so the branch point
//     sits at the origin and the cut coincides with the negative real axis,
//     which the Talbot contour wraps but never crosses; this removes the
//     contour-placement failure mode entirely. |exp(s0 t)| = 1 for the
//     purely imaginary shift, so nothing is amplified.
//
// For the Markovian model A1 is rational and the pole subtraction is the
// complete partial-fraction decomposition; the remainder is identically
// zero and the Talbot sum is skipped.

struct LaplaceDecomposition {
    cplx steady_residue{0.0};
    std::vector<std::pair<cplx, cplx>> poles;  // (location, residue)
    bool has_branch_cut = false;
    cplx branch_point{0.0};
};

inline cplx bracket_denominator(const ReservoirModel& m, const SystemParams& p,
                                cplx s) {
    return cplx(p.delta, 0.5 * p.gamma) + cplx(0.0, 1.0) * s +
           cplx(0.0, 1.0) * ktilde(m, p, s);
}

namespace detail {

/// Roots of w^3 + c1 w + c0 (Cardano + Newton polish).
inline std::array<cplx, 3> cubic_roots(cplx c1, cplx c0) {
    const cplx p3 = c1 / 3.0;
    const cplx q2 = c0 / 2.0;
    const cplx disc = std::sqrt(q2 * q2 + p3 * p3 * p3);
    cplx u = std::pow(-q2 + disc, 1.0 / 3.0);
    if (std::abs(u) < 1e-300) u = std::pow(-q2 - disc, 1.0 / 3.0);
    const cplx rot(-0.5, std::sqrt(3.0) / 2.0);
    std::array<cplx, 3> roots{};
    cplx uk = u;
    for (int k = 0; k < 3; ++k) {
        cplx w = uk - p3 / uk;
        for (int it = 0; it < 4; ++it) {
            const cplx f = (w * w + c1) * w + c0;
            const cplx df = 3.0 * w * w + c1;
            if (std::abs(df) < 1e-300) break;
            w -= f / df;
        }
        roots[k] = w;
        uk *= rot;
    }
    return roots;
}

}  // namespace detail

inline LaplaceDecomposition decompose_a1(const ReservoirModel& m,
                                         const SystemParams& p) {
    LaplaceDecomposition d;
    const double Delta = band_edge_offset(m, p);
    const auto k0 = ktilde_zero_limit(m, p);
    if (k0.finite) {
        const cplx B0 = cplx(p.delta, 0.5 * p.gamma) + cplx(0.0, 1.0) * k0.value;
        if (std::abs(B0) < 1e-14)
            throw ContourFailureError(
                "a1_inverse_laplace: drive resonant with a marginal mode "
                "(B(0) = 0); no steady decomposition");
        d.steady_residue = p.omega_rabi / B0;
    } else {
        d.steady_residue = 0.0;  // threshold: branch point at s = 0, no pole
    }

    if (m.kind == ReservoirKind::Markovian) {
        const cplx s1 = cplx(-0.5 * (p.gamma + p.gamma1), p.delta);
        d.poles.emplace_back(s1, p.omega_rabi / (s1 * cplx(0.0, 1.0)));
        return d;
    }

    // isotropic: B(w^2 - i Delta) = 0  <=>  w^3 + c1 w + c0 = 0
    const cplx CK = std::pow(p.beta, 1.5) * std::exp(cplx(0.0, -pi / 4.0));
    const cplx c1 = cplx(0.5 * p.gamma, -p.delta_g);
    const auto roots = detail::cubic_roots(c1, CK);
    for (const cplx w : roots) {
        if (w.real() <= 1e-10 * (1.0 + std::abs(w))) continue;  // second sheet
        const cplx sk = w * w - cplx(0.0, Delta);
        const cplx Bp = cplx(0.0, 1.0) * (1.0 - CK / (2.0 * w * w * w));
        d.poles.emplace_back(sk, p.omega_rabi / (sk * Bp));
    }
    d.has_branch_cut = true;
    d.branch_point = cplx(0.0, -Delta);
    return d;
}

/// Inverse Laplace transform of A1 at the given times (t > 0), matching the
/// perturbative-mode a1(t) of solve_volterra pointwise.
inline std::vector<cplx> a1_inverse_laplace(const ReservoirModel& m,
                                            const SystemParams& p,
                                            const SolverConfig& cfg,
                                            std::span<const double> t_grid) {
    cfg.validate();
    m.validate(p);
    if (m.kind == ReservoirKind::AnisotropicPBG)
        throw UnsupportedModelError(
            "a1_inverse_laplace: anisotropic model is out of scope for the "
            "time-domain oracle pair");
    const auto dec = decompose_a1(m, p);
    const int M = cfg.talbot_nodes;
    const int nnode = 2 * M;
    const cplx s0 = dec.branch_point;  // 0 for Markovian

    std::vector<cplx> out(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (!(t > 0.0))
            throw std::invalid_argument("a1_inverse_laplace: times must be > 0");
        cplx val = dec.steady_residue;
        for (const auto& [sk, Rk] : dec.poles) val += Rk * std::exp(sk * t);
        if (!dec.has_branch_cut) {
            out[i] = val;  // rational transform: decomposition is exact
            continue;
        }
        const double r = cfg.contour_scale * 2.0 * M / (5.0 * t);
        cplx acc(0.0);
        for (int k = 0; k < nnode; ++k) {
            const double th = -pi + (k + 0.5) * (2.0 * pi / nnode);
            const double ct = std::cos(th) / std::sin(th);
            const cplx s = r * th * cplx(ct, 1.0);
            const cplx sprime =
                r * cplx(ct - th / (std::sin(th) * std::sin(th)), 1.0);
            const cplx su = s + s0;  // unshifted coordinates
            const cplx A1 = p.omega_rabi / (su * bracket_denominator(m, p, su));
            cplx H = A1 - dec.steady_residue / su;
            for (const auto& [sk, Rk] : dec.poles) H -= Rk / (su - sk);
            acc += std::exp(s * t) * H * sprime;
        }
        const cplx remainder =
            std::exp(s0 * t) * acc * (2.0 * pi / nnode) / cplx(0.0, 2.0 * pi);
        if (!std::isfinite(remainder.real()) || !std::isfinite(remainder.imag()))
            throw ContourFailureError(
                "a1_inverse_laplace: Talbot node sum did not stay finite");
        out[i] = val + remainder;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-validation of the two independent routes to a1(t).
// ---------------------------------------------------------------------------

struct CrossValidationReport {
    double max_pointwise_error = 0.0;   ///< max |volterra - inversion| on (0, T]
    double steady_state_error = 0.0;    ///< |a1(T) - a1_steady| (gamma > 0 only)
    bool steady_applicable = false;     ///< false when gamma = 0
};

inline CrossValidationReport cross_validate(const ReservoirModel& m,
                                            const SystemParams& p,
                                            const SolverConfig& cfg) {
    const auto tr = solve_volterra(m, p, cfg, SolveMode::Perturbative);
    std::vector<double> times;
    times.reserve(tr.size() - 1);
    for (std::size_t i = 1; i < tr.size(); ++i) times.push_back(tr.time(i));
    const auto inv = a1_inverse_laplace(m, p, cfg, times);

    CrossValidationReport rep;
    for (std::size_t i = 0; i < times.size(); ++i)
        rep.max_pointwise_error =
            std::max(rep.max_pointwise_error, std::abs(tr.a1[i + 1] - inv[i]));
    if (p.gamma > 0.0) {
        rep.steady_applicable = true;
        rep.steady_state_error = std::abs(tr.a1.back() - a1_steady(m, p));
    }
    return rep;
}

}  // namespace bandedge

#endif

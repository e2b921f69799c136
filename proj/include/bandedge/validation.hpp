#ifndef BANDEDGE_VALIDATION_HPP
#define BANDEDGE_VALIDATION_HPP

#include <cmath>
#include <string>
#include <vector>

#include "bandedge/laplace.hpp"
#include "bandedge/propagation.hpp"
#include "bandedge/reservoir.hpp"
#include "bandedge/spectra.hpp"
#include "bandedge/volterra.hpp"

namespace bandedge {

// Built-in invariant suite behind the `validate` CLI subcommand. Every check
// carries its measured value and the fixed threshold it is judged against;
// the suite passes only if every check passes.

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string note;  // direction of the comparison and the configuration
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct ValidationOptions {
    /// Scale on the anisotropic transform constant (CLI override; the
    /// non-transparency checks must be insensitive to it).
    double aniso_transform_scale = 1.0;
};

namespace detail {

inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

inline ValidationReport run_full_validation(const ValidationOptions& opt = {}) {
    ValidationReport rep;
    auto add = [&](std::string name, bool pass, double measured,
                   double threshold, std::string note) {
        rep.checks.push_back(
            {std::move(name), pass, measured, threshold, std::move(note)});
    };

    const ScalingParams sc;

    // 1. kernel / transform Laplace pair (isotropic, quadrature oracle)
    {
        SystemParams p;
        p.delta = -1.0;
        p.delta_g = 0.0;  // Delta = 1
        const std::vector<cplx> grid = {
            {0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {0.5, 1.0}, {1.0, 1.0},
            {2.0, 1.0}, {0.5, -1.0}, {1.0, -1.0}, {2.0, -1.0}};
        const double err =
            validate_laplace_pair(ReservoirModel::isotropic(), p, grid);
        add("laplace_pair_isotropic", err < 1e-8, err, 1e-8,
            "max |quadrature - closed form| over 9 s-points, Delta = 1");
    }

    // 2. Markovian spectrum equals the Lorentzian closed form
    {
        SystemParams p;
        p.gamma = 1.0;
        p.gamma1 = 1.0;
        const DeltaGrid grid{-10.0, 10.0, 0.005};
        const auto table = spectrum(ReservoirModel::markovian(), p, sc, grid);
        double worst = 0.0;
        for (const auto& s : table.samples) {
            const cplx lorentz = -1.0 / cplx(s.delta, -0.5 * (p.gamma + p.gamma1));
            worst = std::max(worst, std::abs(s.chi - lorentz));
        }
        add("markovian_equivalence", worst < 1e-12, worst, 1e-12,
            "max pointwise |chi - Lorentzian| over [-10,10]");
    }

    // 3. transparency zero at delta = delta_g (isotropic)
    {
        double worst = 0.0;
        bool crossing_ok = true;
        for (const double dg : {-1.0, 0.0, 1.0}) {
            SystemParams p;
            p.delta_g = dg;
            p.delta = dg;
            const auto s = susceptibility(ReservoirModel::isotropic(), p, sc);
            worst = std::max(worst, std::abs(s.chi));
            // absorption minimum on the default grid must sit at delta_g
            const DeltaGrid grid{-10.0, 10.0, 0.005};
            const auto table = spectrum(ReservoirModel::isotropic(), p, sc, grid);
            std::size_t imin = 0;
            for (std::size_t i = 1; i < table.samples.size(); ++i)
                if (table.samples[i].absorption() <
                    table.samples[imin].absorption())
                    imin = i;
            if (std::abs(grid.at(imin) - dg) > grid.step + 1e-12)
                crossing_ok = false;
        }
        add("transparency_zero", worst < 1e-12 && crossing_ok, worst, 1e-12,
            "max |chi(delta_g)| over delta_g in {-1,0,1}; absorption minimum "
            "within one grid step of delta_g");
    }

    // 4. anisotropic non-transparency, insensitive to the transform constant
    {
        SystemParams p;
        p.aniso_transform_scale = opt.aniso_transform_scale;
        const DeltaGrid grid{-10.0, 10.0, 0.005};
        const auto table =
            spectrum(ReservoirModel::anisotropic(), p, sc, grid);
        double chimin = std::numeric_limits<double>::infinity();
        for (const auto& s : table.samples)
            chimin = std::min(chimin, std::abs(s.chi));
        double scale_spread = 0.0;
        SystemParams pdg = p;
        pdg.delta = p.delta_g;
        const cplx ref =
            susceptibility(ReservoirModel::anisotropic(), pdg, sc).chi;
        for (const double f : {0.5, 2.0}) {
            SystemParams q = pdg;
            q.aniso_transform_scale = opt.aniso_transform_scale * f;
            const cplx v =
                susceptibility(ReservoirModel::anisotropic(), q, sc).chi;
            scale_spread = std::max(scale_spread, std::abs(v - ref));
        }
        add("anisotropic_nontransparency",
            chimin > 0.01 && scale_spread < 1e-12, chimin, 0.01,
            "min |chi_a| over [-10,10] (must exceed threshold); chi_a(delta_g) "
            "invariant under c_a rescaling by 0.5 and 2");
    }

    // 5. absorption positivity, all three models
    {
        double worst = 0.0;
        const DeltaGrid grid{-10.0, 10.0, 0.01};
        for (const auto model :
             {ReservoirModel::markovian(), ReservoirModel::isotropic(),
              ReservoirModel::anisotropic()}) {
            SystemParams p;
            p.gamma1 = 1.0;
            p.delta_g = 0.5;
            p.aniso_transform_scale = opt.aniso_transform_scale;
            const auto table = spectrum(model, p, sc, grid);
            for (const auto& s : table.samples)
                worst = std::min(worst, s.absorption());
        }
        add("absorption_positivity", worst >= -1e-12, worst, -1e-12,
            "min absorption over the grid, all three reservoirs (must be >= "
            "-1e-12)");
    }

    // 6. branch continuity at the threshold
    {
        SystemParams p;
        p.delta_g = 1.0;
        p.delta = 1.0;
        const double b32 = std::pow(p.beta, 1.5);
        const double u = std::sqrt(p.delta_g - p.delta);  // 0
        const double v = std::sqrt(p.delta - p.delta_g);  // 0
        const cplx lo = -u / (cplx(p.delta, -0.5 * p.gamma) * u + b32);
        const cplx hi = -v / (cplx(p.delta, -0.5 * p.gamma) * v - cplx(0.0, b32));
        const double jump = std::abs(lo - hi);
        add("branch_continuity", jump < 1e-10, jump, 1e-10,
            "|chi| disagreement of the two branch expressions at delta_g");
    }

    // 7. threshold scaling of the dispersion slope
    {
        SystemParams p;  // delta_g = 0
        std::vector<double> xs, ys;
        for (int i = 0; i < 21; ++i) {
            const double x = 1e-4 * std::pow(100.0, i / 20.0);  // [1e-4, 1e-2]
            p.delta = p.delta_g - x;
            xs.push_back(x);
            ys.push_back(dre_chi_ddelta(ReservoirModel::isotropic(), p, sc));
        }
        const double slope = detail::loglog_slope(xs, ys);
        add("threshold_scaling", std::abs(slope + 0.5) < 0.05, slope, -0.5,
            "log-log slope of dRe chi/ddelta vs (delta_g - delta), target "
            "-0.5 +/- 0.05");
    }

    // 8. Volterra vs inverse Laplace, plus final-value consistency
    {
        SystemParams p;
        p.delta = 1.0;  // delta - delta_g = 1
        SolverConfig cfg;
        cfg.step = 0.01;
        cfg.horizon = 50.0;
        const auto repc =
            cross_validate(ReservoirModel::isotropic(), p, cfg);
        SolverConfig cfg100 = cfg;
        cfg100.horizon = 100.0;
        const auto tr =
            solve_volterra(ReservoirModel::isotropic(), p, cfg100);
        const cplx steady = a1_steady(ReservoirModel::isotropic(), p);
        const double settle_v = std::abs(tr.a1.back() - steady);
        const std::vector<double> t100 = {100.0};
        const double settle_l = std::abs(
            a1_inverse_laplace(ReservoirModel::isotropic(), p, cfg, t100)[0] -
            steady);
        const bool ok = repc.max_pointwise_error < 1e-4 && settle_v < 1e-3 &&
                        settle_l < 1e-3;
        add("volterra_vs_inversion", ok, repc.max_pointwise_error, 1e-4,
            "max pointwise |a1| difference on (0,50], h = 0.01; both routes "
            "within 1e-3 of the steady state at T = 100");
    }

    // 9. convergence order of the product-integration schemes, measured
    //    against a same-scheme h_min/4 reference
    {
        SystemParams p;
        p.delta = -0.5;  // below threshold keeps the error expansion clean
        bool ok = true;
        double worst_factor = 10.0;
        for (const int order : {1, 2}) {
            const double h0 = (order == 1) ? 0.025 : 0.1;
            const double hs[4] = {h0, h0 / 2, h0 / 4, h0 / 8};
            SolverConfig ref;
            ref.step = hs[3] / 4.0;
            ref.horizon = (order == 1) ? 5.0 : 10.0;
            ref.scheme_order = order;
            const auto trr = solve_volterra(ReservoirModel::isotropic(), p, ref);
            double err[4];
            for (int i = 0; i < 4; ++i) {
                SolverConfig c = ref;
                c.step = hs[i];
                const auto tr = solve_volterra(ReservoirModel::isotropic(), p, c);
                const std::size_t stride =
                    static_cast<std::size_t>(std::llround(hs[i] / ref.step));
                double e = 0.0;
                for (std::size_t k = 0; k < tr.size(); ++k)
                    e = std::max(e, std::abs(tr.a1[k] - trr.a1[k * stride]));
                err[i] = e;
            }
            const double nominal = (order == 1) ? 2.0 : 4.0;
            for (int i = 0; i < 3; ++i) {
                const double f = err[i] / err[i + 1];
                worst_factor = std::min(worst_factor, f / nominal * 4.0);
                if (f < nominal) ok = false;
            }
        }
        add("volterra_convergence", ok, worst_factor, 4.0,
            "error-reduction factor per halving of h vs an h_min/4 reference, "
            "normalized to the order-2 scale; >= 2 (order 1) and >= 4 (order "
            "2) on all three refinements");
    }

    // 10. norm bound in coupled mode
    {
        SystemParams p;
        p.omega_rabi = 0.05;
        p.delta = 0.5;
        SolverConfig cfg;
        cfg.step = 0.01;
        cfg.horizon = 20.0;
        const auto tr = solve_volterra(ReservoirModel::isotropic(), p, cfg,
                                       SolveMode::Coupled);
        double excess = -1.0;
        for (std::size_t i = 0; i < tr.size(); ++i)
            excess = std::max(excess, std::norm(tr.a0[i]) + std::norm(tr.a1[i]) - 1.0);
        add("norm_bound", excess <= 1e-9, excess, 1e-9,
            "max of |a0|^2 + |a1|^2 - 1 in coupled mode (population only "
            "leaks outward)");
    }

    // 11. propagation linearity and composition
    {
        MediumSlab slab;
        slab.length = 3.0;
        slab.model = ReservoirModel::isotropic();
        slab.params.delta_g = 0.0;
        auto p1 = gaussian_pulse(1024, 0.05, -0.4);
        auto p2 = gaussian_pulse(1024, 0.05, -0.4);
        for (std::size_t i = 0; i < p2.size(); ++i)
            p2.envelope[i] *= std::exp(cplx(0.0, 0.3 * p2.time(i)));
        const cplx ca(0.7, -0.2), cb(-0.4, 1.1);
        PulseField sum = p1;
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum.envelope[i] = ca * p1.envelope[i] + cb * p2.envelope[i];
        const auto out_sum = propagate(sum, slab);
        const auto out1 = propagate(p1, slab);
        const auto out2 = propagate(p2, slab);
        double lin = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < sum.size(); ++i) {
            lin = std::max(lin, std::abs(out_sum.envelope[i] - ca * out1.envelope[i] -
                                         cb * out2.envelope[i]));
            scale = std::max(scale, std::abs(out_sum.envelope[i]));
        }
        const double lin_rel = lin / scale;

        MediumSlab half = slab;
        half.length = 1.5;
        const auto once = propagate(p1, slab);
        const auto twice = propagate(propagate(p1, half), half);
        double comp = 0.0, cscale = 0.0;
        for (std::size_t i = 0; i < once.size(); ++i) {
            comp = std::max(comp, std::abs(once.envelope[i] - twice.envelope[i]));
            cscale = std::max(cscale, std::abs(once.envelope[i]));
        }
        const double comp_rel = comp / cscale;
        add("propagation_linearity", lin_rel < 1e-12, lin_rel, 1e-12,
            "relative linearity defect of the slab transfer");
        add("propagation_composition", comp_rel < 1e-10, comp_rel, 1e-10,
            "relative defect of L/2 + L/2 vs L propagation");
    }

    return rep;
}

}  // namespace bandedge

#endif

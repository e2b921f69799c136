// bandedge CLI: spectra, dynamics, solver cross-validation, pulse
// propagation and density-of-modes export for a three-level atom whose
// upper level decays near a photonic band edge.
//
// Exit codes: 0 success, 1 validation/runtime failure, 2 usage error,
// 3 I/O error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandedge/csv_io.hpp"
#include "bandedge/laplace.hpp"
#include "bandedge/propagation.hpp"
#include "bandedge/spectra.hpp"
#include "bandedge/validation.hpp"
#include "bandedge/volterra.hpp"

namespace be = bandedge;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string model = "iso";
    be::SystemParams params;
    be::ScalingParams scaling;
};

be::ReservoirModel parse_model(const std::string& name) {
    if (name == "iso") return be::ReservoirModel::isotropic();
    if (name == "aniso") return be::ReservoirModel::anisotropic();
    if (name == "markov") return be::ReservoirModel::markovian();
    throw CLI::ValidationError("--model", "must be one of iso|aniso|markov");
}

void add_config_support(CLI::App* sub) {
    // lets the app-level --config (and other parent options) appear after
    // the subcommand name
    sub->fallthrough(true);
}

void add_model_options(CLI::App* sub, CommonOpts& o) {
    add_config_support(sub);
    sub->add_option("--model", o.model, "reservoir model")
        ->check(CLI::IsMember({"iso", "aniso", "markov"}))
        ->capture_default_str();
    sub->add_option("--gamma", o.params.gamma, "background decay rate of |1>")
        ->capture_default_str();
    sub->add_option("--beta", o.params.beta, "isotropic band-edge coupling (the unit)")
        ->capture_default_str();
    sub->add_option("--beta-a", o.params.beta_a, "anisotropic band-edge coupling")
        ->capture_default_str();
    sub->add_option("--gamma1", o.params.gamma1, "Markovian decay rate to |2>")
        ->capture_default_str();
    sub->add_option("--delta-g", o.params.delta_g, "band-edge detuning")
        ->capture_default_str();
    sub->add_option("--omega-rabi", o.params.omega_rabi, "probe Rabi frequency")
        ->capture_default_str();
    sub->add_option("--chi-prefactor", o.scaling.chi_prefactor,
                    "overall susceptibility scale")
        ->capture_default_str();
    sub->add_option("--omega-over-c", o.scaling.omega_over_c,
                    "omega/c entering v_g and the propagation phase")
        ->capture_default_str();
    sub->add_option("--ca-scale", o.params.aniso_transform_scale,
                    "scale on the anisotropic transform constant c_a")
        ->capture_default_str();
}

void warn_weak_probe(const CommonOpts& o) {
    if (!o.params.weak_probe_ok())
        std::cerr << "warning: Omega/min(beta,gamma) = "
                  << o.params.weak_probe_ratio()
                  << " exceeds the weak-probe threshold "
                  << be::SystemParams::weak_probe_warn_threshold
                  << "; perturbative results may not apply\n";
}

void write_spectrum_plot_script(const std::string& csv_path,
                                const std::string& gp_path) {
    be::write_file(gp_path, [&](std::ostream& os) {
        os << "# gnuplot script: absorption (solid) and dispersion (dashed)\n"
              "set datafile separator ','\n"
              "set xlabel 'delta (units of beta)'\n"
              "set ylabel 'arbitrary units'\n"
              "plot '"
           << csv_path
           << "' using 1:4 with lines lw 2 lc rgb 'black' title 'absorption', \\\n"
              "     '' using 1:2 with lines dashtype 2 lc rgb 'black' title "
              "'dispersion'\n"
              "pause -1\n";
    });
}

int run_spectrum(const CommonOpts& o, const be::DeltaGrid& grid,
                 const std::string& out, const std::string& format) {
    const auto model = parse_model(o.model);
    model.validate(o.params);
    o.scaling.validate();
    warn_weak_probe(o);
    const auto table = be::spectrum(model, o.params, o.scaling, grid);
    be::write_file(out, [&](std::ostream& os) { be::write_spectrum_csv(os, table); });
    if (format == "plot") write_spectrum_plot_script(out, out + ".gp");
    std::cout << "wrote " << table.samples.size() << " samples to " << out
              << "\n";
    return 0;
}

int run_validate(double ca_scale, const std::string& report_path) {
    be::ValidationOptions opt;
    opt.aniso_transform_scale = ca_scale;
    const auto rep = be::run_full_validation(opt);
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                  << "  measured=" << c.measured << " threshold=" << c.threshold
                  << "\n";
    if (!report_path.empty()) {
        json j;
        j["all_pass"] = rep.all_pass();
        j["checks"] = json::array();
        for (const auto& c : rep.checks)
            j["checks"].push_back({{"name", c.name},
                                   {"pass", c.pass},
                                   {"measured", c.measured},
                                   {"threshold", c.threshold},
                                   {"note", c.note}});
        be::write_file(report_path,
                       [&](std::ostream& os) { os << j.dump(2) << "\n"; });
    }
    std::cout << (rep.all_pass() ? "all checks passed\n"
                                 : "some checks FAILED\n");
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "bandedge: absorption/dispersion spectra, non-Markovian dynamics and "
        "slow-light pulse propagation near a photonic band edge"};
    app.require_subcommand(1);
    // flags override config-file keys override defaults; unknown keys rejected.
    // subcommand options live in a [subcommand] section of the file.
    app.set_config("--config", "", "read options from a config file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // ---- spectrum ----
    auto* sp = app.add_subcommand("spectrum", "susceptibility over a detuning grid");
    CommonOpts sp_o;
    be::DeltaGrid sp_grid;
    std::string sp_out = "spectrum.csv", sp_format = "csv", sp_figure;
    add_model_options(sp, sp_o);
    sp->add_option("--delta-min", sp_grid.min, "grid start")->capture_default_str();
    sp->add_option("--delta-max", sp_grid.max, "grid end")->capture_default_str();
    sp->add_option("--delta-step", sp_grid.step, "grid step")->capture_default_str();
    sp->add_option("--out", sp_out, "output CSV path")->capture_default_str();
    sp->add_option("--format", sp_format, "csv | plot (plot adds a gnuplot script)")
        ->check(CLI::IsMember({"csv", "plot"}))
        ->capture_default_str();
    sp->add_option("--figure", sp_figure,
                   "published-spectrum preset: 2a (delta_g=0), 2b (+1), 2c (-1)")
        ->check(CLI::IsMember({"2a", "2b", "2c"}));

    // ---- dynamics ----
    auto* dy = app.add_subcommand("dynamics", "time-domain amplitude trajectories");
    CommonOpts dy_o;
    be::SolverConfig dy_cfg;
    double dy_delta = 0.0;
    std::string dy_out = "trajectory.csv", dy_mode = "perturbative";
    std::string dy_compare;
    add_model_options(dy, dy_o);
    dy->add_option("--delta", dy_delta, "probe detuning")->capture_default_str();
    dy->add_option("--horizon", dy_cfg.horizon, "final time T")->capture_default_str();
    dy->add_option("--step", dy_cfg.step, "time step h")->capture_default_str();
    dy->add_option("--scheme", dy_cfg.scheme_order,
                   "product-integration order (1 or 2)")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();
    dy->add_option("--mode", dy_mode, "perturbative | coupled")
        ->check(CLI::IsMember({"perturbative", "coupled"}))
        ->capture_default_str();
    dy->add_option("--out", dy_out, "output CSV path")->capture_default_str();
    dy->add_option("--cross-validate", dy_compare,
                   "also run the inverse-Laplace oracle and write a JSON "
                   "report to this path");

    // ---- validate ----
    auto* va = app.add_subcommand("validate", "run the built-in invariant suite");
    add_config_support(va);
    double va_ca = 1.0;
    std::string va_report;
    va->add_option("--ca-scale", va_ca,
                   "scale on the anisotropic transform constant")
        ->capture_default_str();
    va->add_option("--report", va_report, "write a JSON report to this path");

    // ---- propagate ----
    auto* pr = app.add_subcommand("propagate", "pulse through an atomic slab");
    CommonOpts pr_o;
    double pr_carrier = 0.0, pr_bandwidth = 0.01, pr_length = 1.0;
    std::size_t pr_n = 4096;
    std::string pr_out = "pulse_out.csv", pr_in;
    bool pr_window = false;
    add_model_options(pr, pr_o);
    pr->add_option("--carrier", pr_carrier, "carrier detuning delta_c")
        ->capture_default_str();
    pr->add_option("--bandwidth", pr_bandwidth,
                   "Gaussian bandwidth (std of |E^hat|^2)")
        ->capture_default_str();
    pr->add_option("--grid-n", pr_n, "grid length (power of two)")
        ->capture_default_str();
    pr->add_option("--length", pr_length, "slab length L")->capture_default_str();
    pr->add_option("--in", pr_in, "input pulse CSV (otherwise Gaussian)");
    pr->add_option("--out", pr_out, "output pulse CSV path")->capture_default_str();
    pr->add_flag("--figure-window", pr_window,
                 "transparency-window preset: compare energy retention through "
                 "an isotropic slab vs a Markovian slab at carrier delta_g");

    // ---- dos ----
    auto* ds = app.add_subcommand("dos", "density of modes near the band edge");
    add_config_support(ds);
    std::string ds_model = "iso", ds_out = "dos.csv", ds_figure;
    be::DeltaGrid ds_grid{-2.0, 4.0, 0.01};
    ds->add_option("--model", ds_model, "reservoir model")
        ->check(CLI::IsMember({"iso", "aniso", "markov"}))
        ->capture_default_str();
    ds->add_option("--x-min", ds_grid.min, "grid start (omega - omega_g)")
        ->capture_default_str();
    ds->add_option("--x-max", ds_grid.max, "grid end")->capture_default_str();
    ds->add_option("--x-step", ds_grid.step, "grid step")->capture_default_str();
    ds->add_option("--out", ds_out, "output CSV path")->capture_default_str();
    ds->add_option("--figure", ds_figure, "preset 1b: isotropic DOS over [-2, 4]")
        ->check(CLI::IsMember({"1b"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sp->parsed()) {
            if (!sp_figure.empty()) {
                // preset supplies defaults; explicit flags keep precedence
                if (sp->count("--model") == 0) sp_o.model = "iso";
                if (sp->count("--gamma") == 0) sp_o.params.gamma = 1.0;
                if (sp->count("--beta") == 0) sp_o.params.beta = 1.0;
                if (sp->count("--delta-g") == 0)
                    sp_o.params.delta_g =
                        (sp_figure == "2a") ? 0.0 : (sp_figure == "2b" ? 1.0 : -1.0);
                if (sp->count("--delta-min") == 0) sp_grid.min = -10.0;
                if (sp->count("--delta-max") == 0) sp_grid.max = 10.0;
                if (sp->count("--delta-step") == 0) sp_grid.step = 0.005;
            }
            (void)sp_grid.size();  // rejects empty/inverted grids early
            return run_spectrum(sp_o, sp_grid, sp_out, sp_format);
        }

        if (dy->parsed()) {
            const auto model = parse_model(dy_o.model);
            dy_o.params.delta = dy_delta;
            model.validate(dy_o.params);
            warn_weak_probe(dy_o);
            const auto mode = (dy_mode == "coupled") ? be::SolveMode::Coupled
                                                     : be::SolveMode::Perturbative;
            const auto tr = be::solve_volterra(model, dy_o.params, dy_cfg, mode);
            be::write_file(dy_out,
                           [&](std::ostream& os) { be::write_trajectory_csv(os, tr); });
            std::cout << "wrote " << tr.size() << " samples to " << dy_out << "\n";
            if (!dy_compare.empty()) {
                const auto rep = be::cross_validate(model, dy_o.params, dy_cfg);
                json j{{"max_pointwise_error", rep.max_pointwise_error},
                       {"steady_state_error", rep.steady_state_error},
                       {"steady_applicable", rep.steady_applicable}};
                be::write_file(dy_compare,
                               [&](std::ostream& os) { os << j.dump(2) << "\n"; });
                std::cout << "cross-validation: max pointwise error "
                          << rep.max_pointwise_error << "\n";
            }
            return 0;
        }

        if (va->parsed()) return run_validate(va_ca, va_report);

        if (pr->parsed()) {
            const auto model = parse_model(pr_o.model);
            pr_o.params.delta = pr_carrier;
            model.validate(pr_o.params);
            pr_o.scaling.validate();
            if (pr_window) {
                // retention through (omega/2c) L = 10 at the transparency point
                const double kL2 = 10.0 / (0.5 * pr_o.scaling.omega_over_c);
                auto pulse = be::gaussian_pulse(pr_n, pr_bandwidth,
                                                pr_o.params.delta_g);
                be::MediumSlab iso{kL2, be::ReservoirModel::isotropic(),
                                   pr_o.params, pr_o.scaling};
                be::SystemParams mpar = pr_o.params;
                mpar.gamma1 = 1.0;
                be::MediumSlab mark{kL2, be::ReservoirModel::markovian(), mpar,
                                    pr_o.scaling};
                const double e0 = pulse.energy();
                const double ri = be::propagate(pulse, iso).energy() / e0;
                const double rm = be::propagate(pulse, mark).energy() / e0;
                json j{{"bandwidth", pr_bandwidth},
                       {"carrier", pr_o.params.delta_g},
                       {"kappa_L", 10.0},
                       {"retention_isotropic", ri},
                       {"retention_markovian", rm}};
                be::write_file(pr_out,
                               [&](std::ostream& os) { os << j.dump(2) << "\n"; });
                std::cout << "energy retention: isotropic " << ri
                          << ", markovian " << rm << " (report: " << pr_out
                          << ")\n";
                return 0;
            }
            be::PulseField pulse;
            if (!pr_in.empty()) {
                std::ifstream is(pr_in, std::ios::binary);
                if (!is) throw std::ios_base::failure("cannot open: " + pr_in);
                pulse = be::read_pulse_csv(is, pr_carrier);
            } else {
                pulse = be::gaussian_pulse(pr_n, pr_bandwidth, pr_carrier);
            }
            be::MediumSlab slab{pr_length, model, pr_o.params, pr_o.scaling};
            const auto out = be::propagate(pulse, slab);
            be::write_file(pr_out,
                           [&](std::ostream& os) { be::write_pulse_csv(os, out); });
            const double retention = out.energy() / pulse.energy();
            std::cout << "wrote " << out.size() << " samples to " << pr_out
                      << "; energy retention " << retention;
            try {
                std::cout << "; group delay " << be::group_delay(pulse, out);
            } catch (const be::PulseAbsorbedError&) {
                std::cout << "; group delay n/a (pulse absorbed)";
            }
            std::cout << "\n";
            return 0;
        }

        if (ds->parsed()) {
            if (!ds_figure.empty()) {
                if (ds->count("--model") == 0) ds_model = "iso";
                if (ds->count("--x-min") == 0) ds_grid.min = -2.0;
                if (ds->count("--x-max") == 0) ds_grid.max = 4.0;
                if (ds->count("--x-step") == 0) ds_grid.step = 0.01;
            }
            (void)ds_grid.size();
            const auto model = parse_model(ds_model);
            be::write_file(ds_out, [&](std::ostream& os) {
                be::write_dos_csv(os, model, ds_grid);
            });
            std::cout << "wrote density of modes to " << ds_out << "\n";
            return 0;
        }
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error (precondition): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

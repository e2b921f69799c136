#ifndef BANDEDGE_TYPES_HPP
#define BANDEDGE_TYPES_HPP

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace bandedge {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors. Each operation documents which of these it can throw; the CLI maps
// them to messages naming the violated precondition.
// ---------------------------------------------------------------------------

struct NonPositiveTauError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The Markovian kernel is a delta distribution; it has no pointwise value.
/// Callers must use ktilde() instead.
struct MarkovianKernelNotPointwiseError : std::logic_error {
    using std::logic_error::logic_error;
};

struct BranchPointSingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct QuadratureNonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GammaZeroSteadyStateError : std::domain_error {
    using std::domain_error::domain_error;
};

struct UnsupportedModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StepTooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ContourFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BandwidthTooWideError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PulseAbsorbedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Physical parameters. All rates and detunings are in units of the
// band-edge coupling beta (beta = 1 reproduces the published spectra
// directly); time is in units of 1/beta.
// ---------------------------------------------------------------------------

struct SystemParams {
    double omega_rabi = 0.01;  ///< probe Rabi frequency Omega >= 0
    double gamma = 1.0;        ///< background decay rate of the upper level
    double beta = 1.0;         ///< isotropic band-edge coupling (the unit)
    double beta_a = 1.0;       ///< anisotropic band-edge coupling
    double delta_g = 0.0;      ///< band-edge detuning (edge minus transition)
    double delta = 0.0;        ///< probe detuning
    double gamma1 = 0.0;       ///< Markovian decay rate into the third level

    /// Scale factor on the anisotropic transform constant c_a. The
    /// short-time form of the anisotropic kernel fixes c_a only up to a
    /// constant, so it stays overridable; qualitative conclusions
    /// (non-vanishing susceptibility) do not depend on it.
    double aniso_transform_scale = 1.0;

    /// Perturbative treatment needs Omega << min(beta, gamma).
    double weak_probe_ratio() const {
        const double scale = std::min(beta, gamma);
        if (scale <= 0.0)
            return std::numeric_limits<double>::infinity();
        return omega_rabi / scale;
    }

    static constexpr double weak_probe_warn_threshold = 0.1;

    bool weak_probe_ok(double threshold = weak_probe_warn_threshold) const {
        return weak_probe_ratio() <= threshold;
    }

    void validate() const {
        if (omega_rabi < 0.0) throw std::invalid_argument("omega_rabi must be >= 0");
        if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
        if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
        if (beta_a < 0.0) throw std::invalid_argument("beta_a must be >= 0");
        if (gamma1 < 0.0) throw std::invalid_argument("gamma1 must be >= 0");
    }
};

/// Overall scale factors that the normalized model leaves free: the
/// susceptibility prefactor (atomic density times dipole moment squared)
/// and omega/c entering the group velocity and propagation phase.
struct ScalingParams {
    double chi_prefactor = 1.0;
    double omega_over_c = 1.0;

    void validate() const {
        if (chi_prefactor < 0.0)
            throw std::invalid_argument("chi_prefactor must be >= 0");
        if (omega_over_c <= 0.0)
            throw std::invalid_argument("omega_over_c must be > 0");
    }
};

// ---------------------------------------------------------------------------
// Reservoir model: exactly one of the three variants.
// ---------------------------------------------------------------------------

enum class ReservoirKind { Markovian, IsotropicPBG, AnisotropicPBG };

struct ReservoirModel {
    ReservoirKind kind = ReservoirKind::IsotropicPBG;

    static ReservoirModel markovian() { return {ReservoirKind::Markovian}; }
    static ReservoirModel isotropic() { return {ReservoirKind::IsotropicPBG}; }
    static ReservoirModel anisotropic() { return {ReservoirKind::AnisotropicPBG}; }

    /// Checks the parameter bounds this variant relies on.
    void validate(const SystemParams& p) const {
        p.validate();
        if (kind == ReservoirKind::IsotropicPBG && p.beta <= 0.0)
            throw std::invalid_argument(
                "isotropic PBG model requires beta > 0");
        if (kind == ReservoirKind::AnisotropicPBG && p.beta_a <= 0.0)
            throw std::invalid_argument(
                "anisotropic PBG model requires beta_a > 0");
    }
};

inline const char* to_string(ReservoirKind k) {
    switch (k) {
        case ReservoirKind::Markovian: return "markov";
        case ReservoirKind::IsotropicPBG: return "iso";
        case ReservoirKind::AnisotropicPBG: return "aniso";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Branch convention: principal square root everywhere, cut along the
// negative real axis, argument of the result in (-pi/2, pi/2]. Limits onto
// the imaginary s axis are taken from Re s > 0. std::sqrt implements this;
// the named wrapper marks call sites where the convention is load-bearing.
// ---------------------------------------------------------------------------

inline cplx principal_sqrt(cplx z) { return std::sqrt(z); }

}  // namespace bandedge

#endif

#ifndef BANDEDGE_PROPAGATION_HPP
#define BANDEDGE_PROPAGATION_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "bandedge/fft.hpp"
#include "bandedge/spectra.hpp"
#include "bandedge/types.hpp"

namespace bandedge {

// Linear pulse propagation through a slab of band-edge atoms. The field
// equation in the retarded frame (vacuum transit subtracted) is linear with
// z-independent chi, so the slab acts as the exact transfer function
//
//   H(delta) = exp( -i (omega/2c) chi(delta) L )
//
// applied per spectral component at delta = carrier + offset. Since the
// absorption -Im chi is nonnegative, |H| <= 1 for every component. Working
// in the frequency domain in one pass avoids z-stepping error entirely and
// makes the composition law H(L) H(L') = H(L + L') exact.

struct PulseField {
    double t0 = 0.0;             ///< time of the first sample
    double dt = 0.0;             ///< grid spacing (> 0)
    double carrier_delta = 0.0;  ///< detuning of the envelope carrier
    std::vector<cplx> envelope;  ///< E(t_n), length a power of two

    std::size_t size() const { return envelope.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("pulse: dt must be > 0");
        if (!is_power_of_two(envelope.size()))
            throw std::invalid_argument(
                "pulse: grid length must be a power of two");
    }

    double energy() const {
        double e = 0.0;
        for (const cplx& v : envelope) e += std::norm(v);
        return e * dt;
    }

    double temporal_centroid() const {
        double e = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < envelope.size(); ++i) {
            const double w = std::norm(envelope[i]);
            e += w;
            acc += w * time(i);
        }
        if (e == 0.0) throw std::invalid_argument("pulse: zero energy");
        return acc / e;
    }

    /// Standard deviation of the power spectrum |E^hat|^2 over the detuning
    /// offset (recorded envelope bandwidth).
    double spectral_std() const {
        validate();
        const auto spec = fft_forward(envelope);
        double e = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            const double w = std::norm(spec[k]);
            const double d = fft_bin_offset(k, spec.size(), dt);
            e += w;
            m1 += w * d;
            m2 += w * d * d;
        }
        m1 /= e;
        m2 /= e;
        return std::sqrt(std::max(0.0, m2 - m1 * m1));
    }
};

/// Gaussian pulse with the given power-spectrum bandwidth (std of |E^hat|^2),
/// centered in an n-point window sized to hold the tails.
inline PulseField gaussian_pulse(std::size_t n, double bandwidth,
                                 double carrier_delta, double window_sigmas = 16.0) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("gaussian_pulse: n must be a power of two");
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("gaussian_pulse: bandwidth must be > 0");
    const double sigma_t = 1.0 / (bandwidth * std::sqrt(2.0));
    PulseField p;
    p.dt = window_sigmas * sigma_t / static_cast<double>(n);
    p.t0 = -0.5 * window_sigmas * sigma_t;
    p.carrier_delta = carrier_delta;
    p.envelope.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = p.time(i);
        p.envelope[i] = std::exp(-t * t / (2.0 * sigma_t * sigma_t));
    }
    return p;
}

struct MediumSlab {
    double length = 0.0;  ///< L >= 0 (omega/2c supplied by scaling)
    ReservoirModel model;
    SystemParams params;
    ScalingParams scaling;

    void validate() const {
        if (length < 0.0) throw std::invalid_argument("slab: length must be >= 0");
        model.validate(params);
        scaling.validate();
        if (!(params.gamma > 0.0))
            throw GammaZeroSteadyStateError(
                "propagate: steady-state susceptibility needs gamma > 0");
    }
};

/// Frequency-domain propagation through the slab. L = 0 returns the input
/// unchanged (bit for bit). Throws BandwidthTooWideError when a non-trivial
/// share of the spectrum sits at the edge of the resolvable band, where the
/// sampled transfer function is no longer trustworthy.
inline PulseField propagate(const PulseField& pulse, const MediumSlab& slab) {
    pulse.validate();
    slab.validate();
    if (slab.length == 0.0) return pulse;

    auto spec = fft_forward(pulse.envelope);
    const std::size_t n = spec.size();
    const double nyquist = pi / pulse.dt;
    double total = 0.0, edge = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = std::norm(spec[k]);
        total += w;
        if (std::abs(fft_bin_offset(k, n, pulse.dt)) > 0.9 * nyquist) edge += w;
    }
    if (total > 0.0 && edge > 1e-6 * total)
        throw BandwidthTooWideError(
            "propagate: pulse spectrum reaches the grid Nyquist band; "
            "refine dt or narrow the pulse");

    SystemParams local = slab.params;
    const double kappa = 0.5 * slab.scaling.omega_over_c * slab.length;
    for (std::size_t k = 0; k < n; ++k) {
        local.delta = pulse.carrier_delta + fft_bin_offset(k, n, pulse.dt);
        const cplx chi = susceptibility(slab.model, local, slab.scaling).chi;
        spec[k] *= std::exp(cplx(0.0, -kappa) * chi);
    }
    PulseField out = pulse;
    out.envelope = fft_inverse(std::move(spec));
    return out;
}

/// Difference of energy-weighted temporal centroids (positive = delayed).
inline double group_delay(const PulseField& in, const PulseField& out) {
    if (in.size() != out.size() || in.dt != out.dt || in.t0 != out.t0)
        throw std::invalid_argument("group_delay: pulses must share the grid");
    const double e_in = in.energy();
    const double e_out = out.energy();
    if (e_out < 1e-6 * e_in)
        throw PulseAbsorbedError(
            "group_delay: output energy below 1e-6 of the input; centroid "
            "is meaningless");
    return out.temporal_centroid() - in.temporal_centroid();
}

}  // namespace bandedge

#endif

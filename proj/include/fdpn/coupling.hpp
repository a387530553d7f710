#pragma once

// Multipath self-interference coupling channel with antenna separation and
// the analog-linear-cancellation main-tap algebra.
//
// Conventions:
//  - Tap powers are absolute post-separation values, normalized so that a
//    direct lossless coupling path has unit power.
//  - Antenna separation c and ALC suppression a are quoted against the whole
//    SI signal; both act physically on the main tap only, which is why the
//    main-tap factors c' and a' come out slightly stronger than c and a.
//  - Profiles are stored dense: one tap per sample delay 0..P, zero-power
//    taps materialized, so the estimation-error model always sees P+1 taps.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdpn/dft.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

struct InfeasibleSeparation : std::domain_error {
    using std::domain_error::domain_error;
};

struct InfeasibleAlc : std::domain_error {
    using std::domain_error::domain_error;
};

struct CouplingProfile {
    std::vector<std::size_t> tap_delays;  ///< dense 0..P
    std::vector<double> tap_powers;       ///< linear, unit direct coupling = 1
    double separation = 0.5;              ///< whole-signal factor c in (0,1)
    double main_delay_s = 0.0;            ///< main-path propagation delay (delta)

    std::size_t max_delay() const { return tap_delays.back(); }
    double main_power() const { return tap_powers.front(); }

    double reflected_power() const {
        double s = 0.0;
        for (std::size_t b = 1; b < tap_powers.size(); ++b) s += tap_powers[b];
        return s;
    }

    double total_power() const { return main_power() + reflected_power(); }

    void validate() const {
        if (tap_delays.empty() || tap_delays.front() != 0)
            throw std::invalid_argument("CouplingProfile: first tap delay must be 0");
        if (tap_delays.size() != tap_powers.size())
            throw std::invalid_argument("CouplingProfile: delay/power size mismatch");
        for (std::size_t i = 0; i < tap_delays.size(); ++i) {
            if (tap_delays[i] != i) throw std::invalid_argument("CouplingProfile: delays must be dense 0..P");
            if (tap_powers[i] < 0.0) throw std::invalid_argument("CouplingProfile: negative tap power");
        }
        if (!(separation > 0.0 && separation < 1.0))
            throw std::invalid_argument("CouplingProfile: separation must be in (0,1)");
        if (main_delay_s < 0.0) throw std::invalid_argument("CouplingProfile: negative main delay");
    }

    /// Densifies a sparse (delays, powers) description; zero-power taps are
    /// inserted at the missing delays.
    static CouplingProfile from_sparse(std::span<const std::size_t> delays, std::span<const double> powers,
                                       double separation, double main_delay_s) {
        if (delays.empty() || delays.size() != powers.size())
            throw std::invalid_argument("CouplingProfile: bad sparse description");
        if (delays.front() != 0) throw std::invalid_argument("CouplingProfile: first tap delay must be 0");
        for (std::size_t i = 1; i < delays.size(); ++i)
            if (delays[i] <= delays[i - 1])
                throw std::invalid_argument("CouplingProfile: delays must be strictly increasing");
        CouplingProfile p;
        const std::size_t max_d = delays.back();
        p.tap_delays.resize(max_d + 1);
        p.tap_powers.assign(max_d + 1, 0.0);
        for (std::size_t b = 0; b <= max_d; ++b) p.tap_delays[b] = b;
        for (std::size_t i = 0; i < delays.size(); ++i) p.tap_powers[delays[i]] = powers[i];
        p.separation = separation;
        p.main_delay_s = main_delay_s;
        p.validate();
        return p;
    }

    /// Reference profile: -30 dB main tap, reflections at -65/-70/-75 dB for
    /// delays 1/2/4 samples (zero tap at delay 3), main delay 6.6713e-10 s.
    /// The stored separation factor is the whole-signal value consistent with
    /// the main-tap algebra (about 29.998 dB).
    static CouplingProfile canonical() {
        const std::size_t delays[] = {0, 1, 2, 4};
        const double powers[] = {1e-3, std::pow(10.0, -6.5), 1e-7, std::pow(10.0, -7.5)};
        const double reflected = powers[1] + powers[2] + powers[3];
        const double c = (powers[0] + reflected) / (1.0 + reflected);
        return from_sparse(delays, powers, c, 6.6713e-10);
    }
};

/// Main-tap suppression factor c' realizing whole-signal separation c:
/// c' = c + (c - 1) * sum of reflected powers.
inline double derive_main_tap_factor(double separation, std::span<const double> reflected_powers) {
    if (!(separation > 0.0 && separation < 1.0))
        throw std::invalid_argument("derive_main_tap_factor: separation must be in (0,1)");
    double refl = 0.0;
    for (double p : reflected_powers) {
        if (p < 0.0) throw std::invalid_argument("derive_main_tap_factor: negative power");
        refl += p;
    }
    const double c_prime = separation + (separation - 1.0) * refl;
    if (c_prime < 0.0)
        throw InfeasibleSeparation("separation is below the multipath feasibility bound");
    return c_prime;
}

/// Main-tap ALC factor a' realizing whole-signal suppression a:
/// a' = (a * p_main + (a - 1) * sum of reflected powers) / p_main.
inline double derive_alc_factor(double alc, const CouplingProfile& profile) {
    if (!(alc > 0.0 && alc <= 1.0)) throw std::invalid_argument("derive_alc_factor: a must be in (0,1]");
    const double p0 = profile.main_power();
    if (p0 <= 0.0) throw std::invalid_argument("derive_alc_factor: main tap power must be positive");
    const double refl = profile.reflected_power();
    const double a_prime = (alc * p0 + (alc - 1.0) * refl) / p0;
    if (a_prime < 0.0) throw InfeasibleAlc("ALC suppression is below the multipath feasibility bound");
    return a_prime;
}

struct FeasibilityBounds {
    double min_separation;  ///< smallest attainable whole-signal c
    double min_alc;         ///< smallest attainable whole-signal a
};

inline FeasibilityBounds feasibility_bounds(const CouplingProfile& profile) {
    const double refl = profile.reflected_power();
    return {refl / (1.0 + refl), refl / (profile.main_power() + refl)};
}

enum class AlcErrorMode { PureAmplitude, PurePhase, Split };

struct AlcRealization {
    AlcErrorMode mode;
    double amplitude_error;  ///< alpha_e
    double delay_error_s;    ///< delta_e
    cplx residual;           ///< alpha_0 = alpha - (alpha - alpha_e) e^{-j w_c delta_e}
};

/// Amplitude/delay errors realizing |alpha_0|^2 = a' * alpha_pre^2 exactly.
/// Split mode puts half of the residual power into the amplitude error and
/// lets the delay error supply the remainder.
inline AlcRealization realize_alc_residual(double alpha_pre, double a_prime, AlcErrorMode mode,
                                           double omega_c) {
    if (alpha_pre < 0.0) throw std::invalid_argument("realize_alc_residual: negative amplitude");
    if (a_prime < 0.0 || a_prime > 1.0)
        throw std::invalid_argument("realize_alc_residual: a' must be in [0,1]");
    AlcRealization r{mode, 0.0, 0.0, {0.0, 0.0}};
    if (a_prime == 0.0 || alpha_pre == 0.0) return r;
    switch (mode) {
        case AlcErrorMode::PureAmplitude: {
            r.amplitude_error = alpha_pre * std::sqrt(a_prime);
            r.residual = {r.amplitude_error, 0.0};
            break;
        }
        case AlcErrorMode::PurePhase: {
            if (omega_c <= 0.0) throw std::invalid_argument("realize_alc_residual: omega_c must be positive");
            const double theta = std::acos(1.0 - 0.5 * a_prime);
            r.delay_error_s = theta / omega_c;
            r.residual = alpha_pre * (cplx{1.0, 0.0} - std::polar(1.0, -theta));
            break;
        }
        case AlcErrorMode::Split: {
            if (omega_c <= 0.0) throw std::invalid_argument("realize_alc_residual: omega_c must be positive");
            const double g = std::sqrt(0.5 * a_prime);
            const double cos_theta = (1.0 + (1.0 - g) * (1.0 - g) - a_prime) / (2.0 * (1.0 - g));
            const double theta = std::acos(std::min(1.0, cos_theta));
            r.amplitude_error = alpha_pre * g;
            r.delay_error_s = theta / omega_c;
            r.residual = alpha_pre * (cplx{1.0, 0.0} - (1.0 - g) * std::polar(1.0, -theta));
            break;
        }
    }
    return r;
}

struct ChannelRealization {
    std::vector<cplx> taps;  ///< aligned to the profile's dense delays
};

/// Reflected taps are i.i.d. circular complex Normal with the profile powers.
/// The main tap has deterministic magnitude sqrt(p0 * a') (or sqrt(p0) before
/// ALC) and a phase drawn uniformly per realization, so E[alpha_0] = 0 across
/// trials. Draw order: main-tap phase, then one complex pair per reflected tap.
inline ChannelRealization draw_channel(const CouplingProfile& profile, bool post_alc, double a_prime,
                                       RandomStream& rng) {
    profile.validate();
    if (post_alc && (a_prime < 0.0 || a_prime > 1.0))
        throw std::invalid_argument("draw_channel: a' must be in [0,1]");
    ChannelRealization ch;
    ch.taps.resize(profile.tap_powers.size());
    const double main_mag = std::sqrt(profile.main_power() * (post_alc ? a_prime : 1.0));
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    ch.taps[0] = std::polar(main_mag, theta);
    for (std::size_t b = 1; b < ch.taps.size(); ++b) {
        const auto [g0, g1] = rng.gaussian_pair();
        const double s = std::sqrt(0.5 * profile.tap_powers[b]);
        ch.taps[b] = {s * g0, s * g1};
    }
    return ch;
}

/// Moves the antennas from ref_distance to distance. Each tap is attenuated
/// by the free-space law over its own path length (distance + delay * c0),
/// so the main tap weakens faster than the reflections; sample delays stay
/// fixed and the main delay becomes distance / c0.
inline CouplingProfile distance_scaled_profile(const CouplingProfile& profile, double distance_m,
                                               double ref_distance_m, double sample_interval_s) {
    if (!(ref_distance_m > 0.0) || distance_m < ref_distance_m)
        throw std::invalid_argument("distance_scaled_profile: need distance >= ref_distance > 0");
    if (sample_interval_s <= 0.0)
        throw std::invalid_argument("distance_scaled_profile: T_s must be positive");
    if (distance_m == ref_distance_m) return profile;
    constexpr double kC0 = 2.998e8;
    CouplingProfile out = profile;
    for (std::size_t b = 0; b < out.tap_powers.size(); ++b) {
        const double excess = static_cast<double>(out.tap_delays[b]) * sample_interval_s * kC0;
        const double ratio = (ref_distance_m + excess) / (distance_m + excess);
        out.tap_powers[b] *= ratio * ratio;
    }
    out.main_delay_s = distance_m / kC0;
    const double refl = out.reflected_power();
    out.separation = (out.main_power() + refl) / (1.0 + refl);
    return out;
}

}  // namespace fdpn

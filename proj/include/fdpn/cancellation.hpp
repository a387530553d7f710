#pragma once

// Digital linear cancellation: estimation-error variance mapping, effective
// channel estimate construction, and time-domain subtraction.
//
// The per-tap estimation-error variance d*a/(P+1) is expressed relative to
// the no-cancellation reference power (the sum of the post-separation tap
// powers); with that convention the zero-phase-noise residual lands exactly
// at the combined ALC+DLC suppression a*d. Callers drawing actual estimate
// errors scale by the reference first.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdpn/coupling.hpp"
#include "fdpn/ofdm.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

/// Per-tap channel-estimation-error variance giving overall DLC suppression d
/// on top of ALC suppression a, split evenly over the P+1 dense taps.
inline double dlc_error_variance(double d, double a, std::size_t max_delay_p) {
    if (d < 0.0 || d > 1.0) throw std::invalid_argument("dlc_error_variance: d must be in [0,1]");
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("dlc_error_variance: a must be in (0,1]");
    return d * a / static_cast<double>(max_delay_p + 1);
}

struct DlcSetting {
    bool ideal = false;
    double suppression = 0.0;     ///< d, linear; unused when ideal
    double est_error_var = 0.0;   ///< sigma_ee^2 relative to the reference power

    static DlcSetting ideal_dlc() { return {true, 0.0, 0.0}; }

    static DlcSetting from_suppression(double d, double a, std::size_t max_delay_p) {
        return {false, d, dlc_error_variance(d, a, max_delay_p)};
    }
};

struct ChannelEstimate {
    std::vector<cplx> taps;  ///< aligned to the channel's dense delays
};

/// estimate_b = alpha_b * rotation_b * cpe + e_b, e_b i.i.d. circular complex
/// Normal with variance est_error_var_abs (absolute units). The cpe factor is
/// the per-trial common phase error absorbed into the effective channel.
inline ChannelEstimate estimate_effective_channel(std::span<const cplx> true_taps,
                                                  std::span<const cplx> carrier_rotations, cplx cpe,
                                                  double est_error_var_abs, RandomStream& rng) {
    if (true_taps.size() != carrier_rotations.size())
        throw std::invalid_argument("estimate_effective_channel: tap/rotation size mismatch");
    if (est_error_var_abs < 0.0)
        throw std::invalid_argument("estimate_effective_channel: negative error variance");
    ChannelEstimate est;
    est.taps.resize(true_taps.size());
    const double s = std::sqrt(0.5 * est_error_var_abs);
    for (std::size_t b = 0; b < true_taps.size(); ++b) {
        const auto [g0, g1] = rng.gaussian_pair();
        est.taps[b] = true_taps[b] * carrier_rotations[b] * cpe + cplx{s * g0, s * g1};
    }
    return est;
}

/// u_n = rx_n - sum_b est_b * x_{n-b}, the reference being cyclic within the
/// CP-extended symbol so the body sees a circular convolution.
inline TimeSymbol apply_dlc(const TimeSymbol& rx, const TimeSymbol& tx_reference,
                            const ChannelEstimate& est, std::span<const std::size_t> tap_delays) {
    const std::size_t len = rx.samples.size();
    if (tx_reference.samples.size() != len)
        throw std::invalid_argument("apply_dlc: rx/reference length mismatch");
    if (est.taps.size() != tap_delays.size())
        throw std::invalid_argument("apply_dlc: estimate/delay size mismatch");
    TimeSymbol out;
    out.samples.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        cplx acc{0.0, 0.0};
        for (std::size_t t = 0; t < est.taps.size(); ++t) {
            const std::size_t d = tap_delays[t];
            const std::size_t src = (i >= d) ? i - d : i + len - d;
            acc += est.taps[t] * tx_reference.samples[src];
        }
        out.samples[i] = rx.samples[i] - acc;
    }
    return out;
}

}  // namespace fdpn

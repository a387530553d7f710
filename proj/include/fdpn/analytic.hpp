#pragma once

// Closed-form engine for the phase-noise-limited residual SI power.
//
// The combined TX/RX phase-noise effect at DFT offset k of a path delayed by
// b samples plus delta seconds is the unit-modulus mixing sequence
//   J_k(b, delta) = (1/N) sum_n e^{j[phi_t((n-b)T_s - delta) - phi_r(n T_s)]} e^{-j 2 pi k n / N}.
// For free-running (Wiener) oscillators its expected power depends only on
// the per-lag kernel K(m) = E[e^{j(psi_{n+m} - psi_n)}]:
//   independent oscillators:  K(m) = e^{-4 pi beta m T_s}
//   common oscillator:        K(m) = e^{-4 pi beta min(m T_s, b T_s + delta)}
// (for the common case the two Wiener differences overlap once the lag
// exceeds the path delay, capping the decorrelation at b T_s + delta), and
//   E[|J_k|^2] = (1/N^2) [ N + sum_{m=1}^{N-1} 2 (N-m) K(m) cos(2 pi k m / N) ].
// The kernel spectrum always sums to exactly 1 over k.
//
// Residual subcarrier powers follow by circularly convolving the data power
// profile with each tap's kernel spectrum:
//   before DLC:  E[|Y_k|^2] = sum_b p_b * (sigma^2 (*) S_b)[k]
//   after DLC:   E[|U_k|^2] = sum_b [ p_b * sum_{l != k} sigma_l^2 S_b[k-l]
//                                     + sigma_ee^2 sigma_k^2 S_b[0] ],
// where p_b are the post-ALC tap powers: the intercarrier leakage keeps the
// true tap powers (linear processing cannot remove it) while the l = k line
// is knocked down to the channel-estimation-error power.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdpn/ofdm.hpp"
#include "fdpn/phase_noise.hpp"

namespace fdpn {

/// Independent-oscillator per-lag kernel e^{-4 pi beta m T_s}.
inline double kernel_independent(std::size_t lag, double beta_hz, double sample_interval_s) {
    const double lag_s = static_cast<double>(lag) * sample_interval_s;
    return std::exp(-4.0 * std::numbers::pi * beta_hz * lag_s);
}

/// Common-oscillator per-lag kernel e^{-4 pi beta min(m T_s, b T_s + delta)}.
inline double kernel_common(std::size_t lag, std::size_t tap_delay, double beta_hz,
                            double sample_interval_s, double delta_s) {
    const double lag_s = static_cast<double>(lag) * sample_interval_s;
    const double cap_s = static_cast<double>(tap_delay) * sample_interval_s + delta_s;
    return std::exp(-4.0 * std::numbers::pi * beta_hz * std::min(lag_s, cap_s));
}

struct KernelSpectrum {
    std::vector<double> values;  ///< E[|J_k|^2], length N, unit sum
    std::size_t tap_delay = 0;
    OscillatorKind kind = OscillatorKind::Independent;
};

/// Kernel spectrum of an arbitrary per-lag kernel K(m), by direct summation
/// with compensated accumulation. A constant kernel K == 1 collapses to an
/// exact delta at offset 0; tiny negative round-off is clamped to zero.
template <typename KernelFn>
KernelSpectrum kernel_spectrum(KernelFn&& kernel, std::size_t n) {
    if (n < 2) throw std::invalid_argument("kernel_spectrum: N must be >= 2");
    KernelSpectrum ks;
    ks.values.assign(n, 0.0);

    std::vector<double> weighted(n, 0.0);  // 2 (N - m) K(m)
    bool all_unit = true;
    for (std::size_t m = 1; m < n; ++m) {
        const double k = kernel(m);
        if (k != 1.0) all_unit = false;
        weighted[m] = 2.0 * static_cast<double>(n - m) * k;
    }
    if (all_unit) {
        ks.values[0] = 1.0;
        return ks;
    }

    std::vector<double> cos_table(n);
    for (std::size_t j = 0; j < n; ++j)
        cos_table[j] = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));

    const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        double sum = static_cast<double>(n);
        double comp = 0.0;  // Kahan carry
        for (std::size_t m = 1; m < n; ++m) {
            const double term = weighted[m] * cos_table[(k * m) % n];
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        double v = sum * inv_n2;
        if (v < 0.0 && v > -1e-15) v = 0.0;
        ks.values[k] = v;
    }
    return ks;
}

/// Kernel spectrum of one coupling tap under the given oscillator scenario.
inline KernelSpectrum tap_kernel_spectrum(const OscillatorScenario& sc, std::size_t tap_delay,
                                          double sample_interval_s, std::size_t n) {
    KernelSpectrum ks =
        sc.kind == OscillatorKind::Independent
            ? kernel_spectrum([&](std::size_t m) { return kernel_independent(m, sc.beta_hz, sample_interval_s); }, n)
            : kernel_spectrum(
                  [&](std::size_t m) {
                      return kernel_common(m, tap_delay, sc.beta_hz, sample_interval_s, sc.tx_rx_delay_s);
                  },
                  n);
    ks.tap_delay = tap_delay;
    ks.kind = sc.kind;
    return ks;
}

struct PowerSpectrum {
    std::vector<double> values;  ///< per-subcarrier linear power
    double reference = 1.0;      ///< normalization denominator for dB views

    double db(std::size_t k) const { return 10.0 * std::log10(values[k] / reference); }
};

namespace detail {

struct NonZeroBins {
    std::vector<std::size_t> index;
    std::vector<double> power;
};

inline NonZeroBins collect_nonzero(std::span<const double> sigma_l2) {
    NonZeroBins nz;
    for (std::size_t l = 0; l < sigma_l2.size(); ++l) {
        if (sigma_l2[l] < 0.0) throw std::invalid_argument("sigma_l2 must be nonnegative");
        if (sigma_l2[l] != 0.0) {
            nz.index.push_back(l);
            nz.power.push_back(sigma_l2[l]);
        }
    }
    return nz;
}

/// out[k] += scale * sum_l sigma_l^2 S[(k-l) mod N]
inline void accumulate_circular(std::vector<double>& out, const NonZeroBins& nz,
                                const std::vector<double>& spectrum, double scale) {
    const std::size_t n = out.size();
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < nz.index.size(); ++i) {
            const std::size_t l = nz.index[i];
            const std::size_t off = (k >= l) ? k - l : k + n - l;
            acc += nz.power[i] * spectrum[off];
        }
        out[k] += scale * acc;
    }
}

}  // namespace detail

/// Subcarrier SI power at the demodulator output, before digital cancellation.
/// tap_powers are the post-ALC channel tap powers. Direct summation; any fast
/// path must agree with it to 1e-9 relative.
inline PowerSpectrum si_power_pre_dlc(const OfdmConfig& cfg, std::span<const double> tap_powers,
                                      std::span<const std::size_t> tap_delays,
                                      const OscillatorScenario& sc, std::span<const double> sigma_l2) {
    const std::size_t n = cfg.n_subcarriers;
    if (sigma_l2.size() != n) throw std::invalid_argument("si_power_pre_dlc: sigma_l2 length mismatch");
    if (tap_powers.size() != tap_delays.size())
        throw std::invalid_argument("si_power_pre_dlc: tap span mismatch");
    PowerSpectrum ps;
    ps.values.assign(n, 0.0);
    const auto nz = detail::collect_nonzero(sigma_l2);
    const bool shared = sc.kind == OscillatorKind::Independent;  // kernel is tap-independent
    KernelSpectrum spec;
    for (std::size_t t = 0; t < tap_powers.size(); ++t) {
        if (tap_powers[t] == 0.0) continue;
        if (!shared || spec.values.empty())
            spec = tap_kernel_spectrum(sc, tap_delays[t], cfg.sample_interval_s, n);
        detail::accumulate_circular(ps.values, nz, spec.values, tap_powers[t]);
    }
    return ps;
}

/// Subcarrier SI power after digital cancellation. sigma_ee2 is the per-tap
/// estimation-error variance in the same units as tap_powers; it enters once
/// per dense tap (zero-power taps included), weighted by that tap's kernel
/// value at offset 0.
inline PowerSpectrum si_power_post_dlc(const OfdmConfig& cfg, std::span<const double> tap_powers,
                                       std::span<const std::size_t> tap_delays,
                                       const OscillatorScenario& sc, std::span<const double> sigma_l2,
                                       double sigma_ee2) {
    const std::size_t n = cfg.n_subcarriers;
    if (sigma_l2.size() != n) throw std::invalid_argument("si_power_post_dlc: sigma_l2 length mismatch");
    if (tap_powers.size() != tap_delays.size())
        throw std::invalid_argument("si_power_post_dlc: tap span mismatch");
    if (sigma_ee2 < 0.0) throw std::invalid_argument("si_power_post_dlc: negative sigma_ee2");
    PowerSpectrum ps;
    ps.values.assign(n, 0.0);
    const auto nz = detail::collect_nonzero(sigma_l2);
    const bool shared = sc.kind == OscillatorKind::Independent;
    KernelSpectrum spec;
    for (std::size_t t = 0; t < tap_powers.size(); ++t) {
        if (!shared || spec.values.empty())
            spec = tap_kernel_spectrum(sc, tap_delays[t], cfg.sample_interval_s, n);
        const double s0 = spec.values[0];
        if (tap_powers[t] != 0.0) {
            detail::accumulate_circular(ps.values, nz, spec.values, tap_powers[t]);
            // remove the l = k line the ICI convolution just added
            for (std::size_t k = 0; k < n; ++k) ps.values[k] -= tap_powers[t] * sigma_l2[k] * s0;
        }
        if (sigma_ee2 != 0.0)
            for (std::size_t k = 0; k < n; ++k) ps.values[k] += sigma_ee2 * sigma_l2[k] * s0;
    }
    for (std::size_t k = 0; k < n; ++k)
        if (ps.values[k] < 0.0 && ps.values[k] > -1e-18) ps.values[k] = 0.0;
    return ps;
}

/// 10 log10 of the mean power over the active bins, against the reference.
inline double inband_average(const PowerSpectrum& spec, std::span<const std::size_t> active_set) {
    if (active_set.empty()) throw std::invalid_argument("inband_average: empty active set");
    double sum = 0.0;
    for (std::size_t k : active_set) {
        if (k >= spec.values.size()) throw std::invalid_argument("inband_average: index out of range");
        sum += spec.values[k];
    }
    const double mean = sum / static_cast<double>(active_set.size());
    return 10.0 * std::log10(mean / spec.reference);
}

/// Unit data power on the active bins, zero elsewhere.
inline std::vector<double> active_bin_powers(const OfdmConfig& cfg) {
    std::vector<double> sigma(cfg.n_subcarriers, 0.0);
    for (std::size_t k : cfg.active_set) sigma[k] = 1.0;
    return sigma;
}

}  // namespace fdpn

#pragma once

// Free-running-oscillator (Wiener) phase trajectories.
//
// The phase difference over any interval tau is Normal(0, 4*pi*beta*tau),
// beta being the oscillator 3-dB bandwidth. Streams are laid out so that the
// transmit phase can be read at tap-delayed instants (i - b)*T_s - delta and
// the receive phase at i*T_s, for sample indices i in [0, n) and tap delays
// b in [0, max_tap].
//
// Common-oscillator scenario: one Brownian path sampled on the interleaved
// grid {j*T_s - frac(delta)} u {j*T_s}; delta is split into whole-sample and
// fractional parts, and increments are drawn in time-ascending order with
// zero-length gaps skipped. Both stream views share that single path, so the
// exact Brownian joint statistics are preserved.

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdpn/rng.hpp"

namespace fdpn {

enum class OscillatorKind { Common, Independent };

struct OscillatorScenario {
    OscillatorKind kind = OscillatorKind::Common;
    double beta_hz = 0.0;        ///< 3-dB bandwidth of the free-running oscillator
    double tx_rx_delay_s = 0.0;  ///< delay between up- and downconversion interfaces (delta)

    void validate() const {
        if (beta_hz < 0.0) throw std::invalid_argument("OscillatorScenario: beta must be >= 0");
        if (tx_rx_delay_s < 0.0) throw std::invalid_argument("OscillatorScenario: delay must be >= 0");
    }
};

/// One Wiener increment over `duration_s`: Normal(0, 4*pi*beta*duration).
/// A zero product yields exactly 0 without consuming randomness.
inline double wiener_increment(double beta_hz, double duration_s, RandomStream& rng) {
    if (beta_hz < 0.0) throw std::invalid_argument("wiener_increment: negative beta");
    if (duration_s < 0.0) throw std::invalid_argument("wiener_increment: negative duration");
    const double var = 4.0 * std::numbers::pi * beta_hz * duration_s;
    if (var == 0.0) return 0.0;
    return std::sqrt(var) * rng.gaussian();
}

inline std::vector<double> sample_wiener_increments(double beta_hz, std::span<const double> durations,
                                                    RandomStream& rng) {
    std::vector<double> out;
    out.reserve(durations.size());
    for (double tau : durations) out.push_back(wiener_increment(beta_hz, tau, rng));
    return out;
}

class PhaseStreams {
public:
    /// phi_t(m*T_s - delta) for sample instant m in [-max_tap, length()).
    double tx_instant(std::ptrdiff_t m) const {
        assert(m >= -static_cast<std::ptrdiff_t>(max_tap_) && m < static_cast<std::ptrdiff_t>(n_));
        return tx_[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(tx_off_) + m)];
    }

    /// phi_t((i - tap)*T_s - delta); requires tap <= max_tap(), i < length().
    double tx_delayed(std::size_t tap, std::size_t i) const {
        assert(tap <= max_tap_ && i < n_);
        return tx_instant(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(tap));
    }

    /// phi_r(i*T_s); requires i < length().
    double rx(std::size_t i) const {
        assert(i < n_);
        return rx_[rx_off_ + i];
    }

    std::size_t length() const { return n_; }
    std::size_t max_tap() const { return max_tap_; }

private:
    friend PhaseStreams build_streams(const OscillatorScenario&, std::size_t, std::size_t, double,
                                      RandomStream&);
    std::vector<double> tx_, rx_;
    std::size_t tx_off_ = 0, rx_off_ = 0, n_ = 0, max_tap_ = 0;
};

/// Assembles the TX/RX phase streams for one OFDM symbol span of n samples.
/// The phase at the earliest required instant is 0; only intra-symbol
/// differences enter any statistic downstream.
inline PhaseStreams build_streams(const OscillatorScenario& sc, std::size_t n, std::size_t max_tap,
                                  double sample_interval_s, RandomStream& rng) {
    sc.validate();
    if (n < 1) throw std::invalid_argument("build_streams: n must be >= 1");
    if (sample_interval_s <= 0.0) throw std::invalid_argument("build_streams: T_s must be positive");

    const double ts = sample_interval_s;
    PhaseStreams ps;
    ps.n_ = n;
    ps.max_tap_ = max_tap;

    if (sc.kind == OscillatorKind::Independent) {
        // Two separate paths. TX first (instants m*T_s - delta, m in [-max_tap, n)),
        // then RX (instants i*T_s, i in [0, n)); delta shifts the whole TX grid and
        // therefore has no statistical effect in this scenario.
        ps.tx_.resize(n + max_tap);
        double phi = 0.0;
        for (std::size_t idx = 0; idx < ps.tx_.size(); ++idx) {
            ps.tx_[idx] = phi;
            phi += wiener_increment(sc.beta_hz, ts, rng);
        }
        ps.rx_.resize(n);
        phi = 0.0;
        for (std::size_t idx = 0; idx < n; ++idx) {
            ps.rx_[idx] = phi;
            phi += wiener_increment(sc.beta_hz, ts, rng);
        }
        ps.tx_off_ = max_tap;
        ps.rx_off_ = 0;
        return ps;
    }

    // Common oscillator: delta = q*T_s + f with 0 <= f < T_s.
    const std::size_t q = static_cast<std::size_t>(std::floor(sc.tx_rx_delay_s / ts));
    const double frac = sc.tx_rx_delay_s - static_cast<double>(q) * ts;
    const std::size_t base = max_tap + q;  // grid starts at instant -(base*T_s) - frac
    const std::size_t len = n + base;

    ps.tx_.resize(len);  // shifted samples phi(j*T_s - frac)
    ps.rx_.resize(len);  // integer samples phi(j*T_s)
    double phi = 0.0;
    if (frac > 0.0) {
        for (std::size_t idx = 0; idx < len; ++idx) {
            ps.tx_[idx] = phi;
            phi += wiener_increment(sc.beta_hz, frac, rng);
            ps.rx_[idx] = phi;
            if (idx + 1 < len) phi += wiener_increment(sc.beta_hz, ts - frac, rng);
        }
    } else {
        // Grids coincide: a single plain walk serves both views.
        for (std::size_t idx = 0; idx < len; ++idx) {
            ps.tx_[idx] = phi;
            ps.rx_[idx] = phi;
            phi += wiener_increment(sc.beta_hz, ts, rng);
        }
    }
    // tx_delayed(b, i) = phi((i - b - q)*T_s - frac) = tx_[i - b + max_tap]
    ps.tx_off_ = max_tap;
    ps.rx_off_ = base;
    return ps;
}

/// Subtracts the circular mean angle of e^{j phi} over the block.
inline std::vector<double> remove_cpe(std::span<const double> phases) {
    if (phases.empty()) throw std::invalid_argument("remove_cpe: empty input");
    std::complex<double> acc{0.0, 0.0};
    for (double p : phases) acc += std::complex<double>{std::cos(p), std::sin(p)};
    const double mean_angle = std::arg(acc);
    std::vector<double> out;
    out.reserve(phases.size());
    for (double p : phases) out.push_back(p - mean_angle);
    return out;
}

}  // namespace fdpn

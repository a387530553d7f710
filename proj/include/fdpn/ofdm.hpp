#pragma once

// OFDM baseband waveform: numerology, symbol generation with cyclic prefix,
// and CP-synchronized demodulation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fdpn/dft.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

enum class Modulation { Qam16 };

struct OfdmConfig {
    std::size_t n_subcarriers = 0;           ///< DFT size N
    std::vector<std::size_t> active_set;     ///< occupied bin indices in [1, N)
    std::size_t cp_len = 0;                  ///< cyclic prefix, samples
    double sample_interval_s = 0.0;          ///< T_s
    double subcarrier_spacing_hz = 0.0;
    double carrier_freq_hz = 0.0;
    Modulation modulation = Modulation::Qam16;

    double omega_c() const { return 2.0 * std::numbers::pi * carrier_freq_hz; }
    std::size_t symbol_len() const { return n_subcarriers + cp_len; }

    void validate() const {
        if (n_subcarriers < 2) throw std::invalid_argument("OfdmConfig: n_subcarriers < 2");
        if (cp_len >= n_subcarriers) throw std::invalid_argument("OfdmConfig: cp_len must be < n_subcarriers");
        if (sample_interval_s <= 0.0 || subcarrier_spacing_hz <= 0.0)
            throw std::invalid_argument("OfdmConfig: rates must be positive");
        const double prod = sample_interval_s * subcarrier_spacing_hz * static_cast<double>(n_subcarriers);
        if (std::abs(prod - 1.0) > 1e-12)
            throw std::invalid_argument("OfdmConfig: T_s * spacing * N != 1");
        std::vector<char> occupied(n_subcarriers, 0);
        for (std::size_t k : active_set) {
            if (k == 0) throw std::invalid_argument("OfdmConfig: DC bin cannot be active");
            if (k >= n_subcarriers) throw std::invalid_argument("OfdmConfig: active index out of range");
            if (occupied[k]) throw std::invalid_argument("OfdmConfig: duplicate active index");
            occupied[k] = 1;
        }
        for (std::size_t k = 1; k < n_subcarriers; ++k)
            if (occupied[k] != occupied[n_subcarriers - k])
                throw std::invalid_argument("OfdmConfig: active set not symmetric about DC");
    }

    /// per_side bins on each side of DC: {1..per_side} and {N-per_side..N-1}.
    static std::vector<std::size_t> symmetric_active_set(std::size_t n, std::size_t per_side) {
        std::vector<std::size_t> set;
        set.reserve(2 * per_side);
        for (std::size_t k = 1; k <= per_side; ++k) set.push_back(k);
        for (std::size_t k = n - per_side; k < n; ++k) set.push_back(k);
        return set;
    }

    /// 1024-subcarrier numerology resembling a cellular downlink: 600 active
    /// bins, 63-sample CP, 15.36 MHz sampling, 15 kHz spacing, 1.875 GHz carrier.
    static OfdmConfig lte_like() {
        OfdmConfig cfg;
        cfg.n_subcarriers = 1024;
        cfg.active_set = symmetric_active_set(1024, 300);
        cfg.cp_len = 63;
        cfg.sample_interval_s = 1.0 / 15.36e6;
        cfg.subcarrier_spacing_hz = 15e3;
        cfg.carrier_freq_hz = 1.875e9;
        cfg.modulation = Modulation::Qam16;
        return cfg;
    }
};

struct FreqSymbol {
    std::vector<cplx> bins;  ///< length N
};

struct TimeSymbol {
    std::vector<cplx> samples;  ///< length N + cp_len, CP first
};

/// One Gray-mapped 16QAM point with unit average power.
/// Per-rail mapping of the 2-bit value b1 b0: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
inline cplx draw_qam16(RandomStream& rng) {
    static constexpr double kInvSqrt10 = 0.31622776601683794;
    static constexpr double kLevel[4] = {-3.0, -1.0, 3.0, 1.0};
    const unsigned bits = static_cast<unsigned>(rng.bits() & 0xF);
    return {kLevel[bits >> 2] * kInvSqrt10, kLevel[bits & 3] * kInvSqrt10};
}

inline std::pair<FreqSymbol, TimeSymbol> generate_symbol(const OfdmConfig& cfg, RandomStream& rng,
                                                         const DftPlan& plan) {
    cfg.validate();
    if (plan.size() != cfg.n_subcarriers) throw std::invalid_argument("generate_symbol: plan size mismatch");
    FreqSymbol freq;
    freq.bins.assign(cfg.n_subcarriers, cplx{0.0, 0.0});
    for (std::size_t k : cfg.active_set) freq.bins[k] = draw_qam16(rng);
    std::vector<cplx> body = plan.inverse(freq.bins);
    TimeSymbol time;
    time.samples.resize(cfg.symbol_len());
    for (std::size_t i = 0; i < cfg.cp_len; ++i)
        time.samples[i] = body[cfg.n_subcarriers - cfg.cp_len + i];
    std::copy(body.begin(), body.end(), time.samples.begin() + static_cast<std::ptrdiff_t>(cfg.cp_len));
    return {std::move(freq), std::move(time)};
}

inline std::pair<FreqSymbol, TimeSymbol> generate_symbol(const OfdmConfig& cfg, RandomStream& rng) {
    return generate_symbol(cfg, rng, DftPlan(cfg.n_subcarriers));
}

/// Strips the cyclic prefix and transforms the body (ideal synchronization).
inline FreqSymbol demodulate(const TimeSymbol& time, const OfdmConfig& cfg, const DftPlan& plan) {
    if (time.samples.size() != cfg.symbol_len())
        throw std::invalid_argument("demodulate: symbol length mismatch");
    if (plan.size() != cfg.n_subcarriers) throw std::invalid_argument("demodulate: plan size mismatch");
    std::span<const cplx> body(time.samples.data() + cfg.cp_len, cfg.n_subcarriers);
    return FreqSymbol{plan.forward(body)};
}

inline FreqSymbol demodulate(const TimeSymbol& time, const OfdmConfig& cfg) {
    return demodulate(time, cfg, DftPlan(cfg.n_subcarriers));
}

}  // namespace fdpn

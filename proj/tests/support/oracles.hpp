#pragma once

// Independent oracles used by the unit and acceptance suites. These stay
// deliberately separate from the library implementation paths they check:
// plain double-sum DFTs, sort-based Brownian path sampling on the union of
// required instants, and direct evaluation of the demodulated SI signal.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fdpn/dft.hpp"
#include "fdpn/phase_noise.hpp"

namespace oracles {

using cplx = std::complex<double>;

/// Plain O(N^2) forward DFT, X[k] = sum_n x[n] e^{-j 2 pi k n / N}.
inline std::vector<cplx> direct_dft(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t m = 0; m < n; ++m) {
            const double phi =
                -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(m) / static_cast<double>(n);
            acc += x[m] * cplx{std::cos(phi), std::sin(phi)};
        }
        out[k] = acc;
    }
    return out;
}

/// Brownian path sampled at the given ascending instants, variance
/// 4 pi beta tau per gap, starting at 0.
inline std::vector<double> brownian_at(const std::vector<double>& instants, double beta,
                                       std::mt19937_64& eng) {
    std::normal_distribution<double> normal;
    std::vector<double> vals(instants.size());
    vals[0] = 0.0;
    for (std::size_t i = 1; i < instants.size(); ++i) {
        const double tau = instants[i] - instants[i - 1];
        const double var = 4.0 * std::numbers::pi * beta * tau;
        vals[i] = vals[i - 1] + (var > 0.0 ? std::sqrt(var) * normal(eng) : 0.0);
    }
    return vals;
}

struct MeanWithError {
    std::vector<double> mean;
    std::vector<double> stderr_of_mean;
};

/// Streaming per-bin mean/variance (Welford), stable for near-constant bins.
class RunningStats {
public:
    explicit RunningStats(std::size_t n) : mean_(n, 0.0), m2_(n, 0.0) {}

    void add(const std::vector<double>& sample) {
        ++count_;
        for (std::size_t k = 0; k < mean_.size(); ++k) {
            const double d = sample[k] - mean_[k];
            mean_[k] += d / static_cast<double>(count_);
            m2_[k] += d * (sample[k] - mean_[k]);
        }
    }

    MeanWithError finish() const {
        MeanWithError out;
        out.mean = mean_;
        out.stderr_of_mean.resize(mean_.size());
        const double m = static_cast<double>(count_);
        for (std::size_t k = 0; k < mean_.size(); ++k)
            out.stderr_of_mean[k] = std::sqrt(std::max(0.0, m2_[k] / (m - 1.0)) / m);
        return out;
    }

private:
    std::vector<double> mean_, m2_;
    std::size_t count_ = 0;
};

/// Brute-force Monte-Carlo estimate of the expected power of the phase-noise
/// mixing sequence J_k for one tap delay: paths are sampled on the sorted
/// union of every required instant, so the joint statistics are exact.
inline MeanWithError mc_kernel_power(fdpn::OscillatorKind kind, double beta, double ts, std::size_t b,
                                     double delta, std::size_t n, std::size_t paths,
                                     std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    const fdpn::DftPlan plan(n);

    std::vector<double> tx_inst(n), rx_inst(n);
    for (std::size_t i = 0; i < n; ++i) {
        tx_inst[i] = (static_cast<double>(i) - static_cast<double>(b)) * ts - delta;
        rx_inst[i] = static_cast<double>(i) * ts;
    }

    std::vector<double> grid;
    std::vector<std::size_t> tx_idx(n), rx_idx(n);
    if (kind == fdpn::OscillatorKind::Common) {
        grid = tx_inst;
        grid.insert(grid.end(), rx_inst.begin(), rx_inst.end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        for (std::size_t i = 0; i < n; ++i) {
            tx_idx[i] = static_cast<std::size_t>(
                std::lower_bound(grid.begin(), grid.end(), tx_inst[i]) - grid.begin());
            rx_idx[i] = static_cast<std::size_t>(
                std::lower_bound(grid.begin(), grid.end(), rx_inst[i]) - grid.begin());
        }
    }

    RunningStats stats(n);
    std::vector<cplx> seq(n);
    std::vector<double> powers(n);
    for (std::size_t p = 0; p < paths; ++p) {
        if (kind == fdpn::OscillatorKind::Common) {
            const std::vector<double> path = brownian_at(grid, beta, eng);
            for (std::size_t i = 0; i < n; ++i) {
                const double psi = path[tx_idx[i]] - path[rx_idx[i]];
                seq[i] = {std::cos(psi), std::sin(psi)};
            }
        } else {
            const std::vector<double> tx = brownian_at(tx_inst, beta, eng);
            const std::vector<double> rx = brownian_at(rx_inst, beta, eng);
            for (std::size_t i = 0; i < n; ++i) {
                const double psi = tx[i] - rx[i];
                seq[i] = {std::cos(psi), std::sin(psi)};
            }
        }
        const std::vector<cplx> j_vec = plan.forward(seq);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) powers[k] = std::norm(j_vec[k] * inv_n);
        stats.add(powers);
    }
    return stats.finish();
}

/// Brute-force Monte-Carlo of the demodulated SI power before digital
/// cancellation: random unit-power QPSK data on the active bins, random
/// zero-mean complex taps with the given powers, exact Brownian phase
/// factors, circular tap convolution over one symbol, direct demodulation.
inline MeanWithError mc_pre_dlc_power(fdpn::OscillatorKind kind, double beta, double ts, double delta,
                                      const std::vector<std::size_t>& tap_delays,
                                      const std::vector<double>& tap_powers,
                                      const std::vector<std::size_t>& active, std::size_t n,
                                      std::size_t realizations, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> qpsk(0, 3);
    const fdpn::DftPlan plan(n);
    const std::size_t max_b = *std::max_element(tap_delays.begin(), tap_delays.end());

    // one Brownian grid covering phi_t((i - b) ts - delta) for all taps plus phi_r(i ts)
    std::vector<double> tx_inst(n + max_b), rx_inst(n);
    for (std::size_t i = 0; i < tx_inst.size(); ++i)
        tx_inst[i] = (static_cast<double>(i) - static_cast<double>(max_b)) * ts - delta;
    for (std::size_t i = 0; i < n; ++i) rx_inst[i] = static_cast<double>(i) * ts;

    std::vector<double> grid = tx_inst;
    grid.insert(grid.end(), rx_inst.begin(), rx_inst.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    auto index_of = [&](double t) {
        return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
    };
    std::vector<std::size_t> tx_idx(tx_inst.size()), rx_idx(n);
    for (std::size_t i = 0; i < tx_inst.size(); ++i) tx_idx[i] = index_of(tx_inst[i]);
    for (std::size_t i = 0; i < n; ++i) rx_idx[i] = index_of(rx_inst[i]);

    RunningStats stats(n);
    std::vector<double> powers(n);
    std::vector<cplx> bins(n), y(n);
    for (std::size_t r = 0; r < realizations; ++r) {
        std::fill(bins.begin(), bins.end(), cplx{0.0, 0.0});
        for (std::size_t k : active) {
            const double phi = (0.5 + static_cast<double>(qpsk(eng))) * std::numbers::pi / 2.0;
            bins[k] = {std::cos(phi), std::sin(phi)};
        }
        const std::vector<cplx> z = plan.inverse(bins);

        std::vector<cplx> taps(tap_delays.size());
        for (std::size_t t = 0; t < taps.size(); ++t) {
            const double s = std::sqrt(0.5 * tap_powers[t]);
            taps[t] = {s * normal(eng), s * normal(eng)};
        }

        std::vector<double> tx_path, rx_path;
        if (kind == fdpn::OscillatorKind::Common) {
            const std::vector<double> path = brownian_at(grid, beta, eng);
            tx_path.resize(tx_inst.size());
            rx_path.resize(n);
            for (std::size_t i = 0; i < tx_inst.size(); ++i) tx_path[i] = path[tx_idx[i]];
            for (std::size_t i = 0; i < n; ++i) rx_path[i] = path[rx_idx[i]];
        } else {
            tx_path = brownian_at(tx_inst, beta, eng);
            rx_path = brownian_at(rx_inst, beta, eng);
        }

        for (std::size_t i = 0; i < n; ++i) {
            cplx acc{0.0, 0.0};
            for (std::size_t t = 0; t < taps.size(); ++t) {
                const std::size_t b = tap_delays[t];
                const std::size_t src = (i >= b) ? i - b : i + n - b;
                const double psi = tx_path[max_b + i - b] - rx_path[i];
                acc += taps[t] * z[src] * cplx{std::cos(psi), std::sin(psi)};
            }
            y[i] = acc;
        }
        const std::vector<cplx> demod = plan.forward(y);
        for (std::size_t k = 0; k < n; ++k) powers[k] = std::norm(demod[k]);
        stats.add(powers);
    }
    return stats.finish();
}

}  // namespace oracles

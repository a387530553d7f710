#pragma once

// Sample-level Monte-Carlo engine for the full-duplex SI link.
//
// Per trial, with a private random stream: one CP-extended OFDM symbol is
// generated, TX phase noise is applied over the whole CP+body span, the
// signal runs through the multipath coupling channel with the ALC residual
// on the main tap and the static carrier rotations absorbed into the taps,
// RX phase noise multiplies the sum, the digital canceller subtracts the
// estimated effective channel applied to the clean reference, and both the
// pre- and post-DLC bodies are demodulated.
//
// Trials are embarrassingly parallel. Accumulation is blocked: trials are
// grouped into fixed-size blocks, each block is summed serially in trial
// order, and block partials are reduced in block order, so the result is
// bit-identical no matter how many worker threads run.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fdpn/analytic.hpp"
#include "fdpn/cancellation.hpp"
#include "fdpn/coupling.hpp"
#include "fdpn/ofdm.hpp"
#include "fdpn/phase_noise.hpp"
#include "fdpn/rng.hpp"

namespace fdpn {

struct AlcSetting {
    bool ideal = false;        ///< perfect suppression of the main tap
    double suppression = 1.0;  ///< whole-signal factor a, linear; unused when ideal
    AlcErrorMode error_mode = AlcErrorMode::PureAmplitude;

    static AlcSetting ideal_alc() { return {true, 0.0, AlcErrorMode::PureAmplitude}; }
    static AlcSetting from_db(double db, AlcErrorMode mode = AlcErrorMode::PureAmplitude) {
        return {false, std::pow(10.0, -db / 10.0), mode};
    }
};

struct ScenarioConfig {
    OfdmConfig waveform;
    CouplingProfile profile;
    OscillatorScenario oscillator;
    AlcSetting alc;
    DlcSetting dlc;            ///< est_error_var is relative to the reference power
    std::size_t trials = 1;
    std::uint64_t master_seed = 1;
    bool dlc_tracks_cpe = true;  ///< absorb the common phase error into the estimate

    void validate() const {
        waveform.validate();
        profile.validate();
        oscillator.validate();
        if (trials < 1) throw std::invalid_argument("ScenarioConfig: trials must be >= 1");
        if (profile.max_delay() > waveform.cp_len)
            throw std::invalid_argument("ScenarioConfig: tap delays must not exceed the cyclic prefix");
    }
};

/// Average no-cancellation subcarrier power at the demodulator output:
/// the sum of the post-separation tap powers times the mean active-bin data
/// power (which is 1 by construction).
inline double reference_power(const ScenarioConfig& cfg) { return cfg.profile.total_power(); }

struct TrialPowers {
    std::vector<double> pre;   ///< |Y_k|^2
    std::vector<double> post;  ///< |U_k|^2
    double inband_pre = 0.0;   ///< mean over active bins
    double inband_post = 0.0;
};

namespace detail {

struct SimDerived {
    double a_prime = 0.0;           ///< main-tap ALC factor (0 when ideal)
    cplx alc_unit = {1.0, 0.0};     ///< unit phase of the realized ALC residual
    double sigma_ee_abs = 0.0;      ///< absolute per-tap estimate-error variance
    std::vector<cplx> rotations;    ///< e^{-j w_c (b T_s + delta)} per tap
};

inline SimDerived derive(const ScenarioConfig& cfg) {
    SimDerived d;
    if (cfg.alc.ideal) {
        d.a_prime = 0.0;
    } else {
        d.a_prime = derive_alc_factor(cfg.alc.suppression, cfg.profile);
        const AlcRealization alc = realize_alc_residual(std::sqrt(cfg.profile.main_power()), d.a_prime,
                                                        cfg.alc.error_mode, cfg.waveform.omega_c());
        const double mag = std::abs(alc.residual);
        if (mag > 0.0) d.alc_unit = alc.residual / mag;
    }
    if (!cfg.dlc.ideal) {
        // In mixed ideal-ALC scenarios the realized analog suppression is the
        // best attainable one, and that is what the error mapping sees.
        const double a_realized =
            cfg.alc.ideal ? feasibility_bounds(cfg.profile).min_alc : cfg.alc.suppression;
        d.sigma_ee_abs = dlc_error_variance(cfg.dlc.suppression, a_realized, cfg.profile.max_delay()) *
                         reference_power(cfg);
    }
    const double delta = cfg.profile.main_delay_s;
    const double ts = cfg.waveform.sample_interval_s;
    const double wc = cfg.waveform.omega_c();
    d.rotations.resize(cfg.profile.tap_powers.size());
    for (std::size_t b = 0; b < d.rotations.size(); ++b)
        d.rotations[b] = std::polar(1.0, -wc * (static_cast<double>(b) * ts + delta));
    return d;
}

inline TrialPowers run_trial_impl(const ScenarioConfig& cfg, const SimDerived& drv, const DftPlan& plan,
                                  std::size_t trial_index) {
    const std::size_t n = cfg.waveform.n_subcarriers;
    const std::size_t cp = cfg.waveform.cp_len;
    const std::size_t len = cfg.waveform.symbol_len();
    const std::size_t p = cfg.profile.max_delay();

    RandomStream rng = trial_stream(cfg.master_seed, trial_index);

    auto [freq, time] = generate_symbol(cfg.waveform, rng, plan);
    const PhaseStreams phases =
        build_streams(cfg.oscillator, len, p, cfg.waveform.sample_interval_s, rng);

    ChannelRealization channel = draw_channel(cfg.profile, true, drv.a_prime, rng);
    channel.taps[0] *= drv.alc_unit;

    // e^{j phi_t} along the TX path (index m+p holds sample instant m) and
    // e^{-j phi_r} along the RX grid.
    std::vector<cplx> tx_rot(len + p);
    for (std::size_t j = 0; j < len + p; ++j) {
        const double ph =
            phases.tx_instant(static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(p));
        tx_rot[j] = {std::cos(ph), std::sin(ph)};
    }
    std::vector<cplx> rx_rot(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double ph = phases.rx(i);
        rx_rot[i] = {std::cos(ph), -std::sin(ph)};
    }

    std::vector<cplx> effective(channel.taps.size());
    for (std::size_t b = 0; b < effective.size(); ++b) effective[b] = channel.taps[b] * drv.rotations[b];

    TimeSymbol received;
    received.samples.assign(len, cplx{0.0, 0.0});
    for (std::size_t b = 0; b < effective.size(); ++b) {
        if (effective[b] == cplx{0.0, 0.0}) continue;
        const cplx h = effective[b];
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t src = (i >= b) ? i - b : i + len - b;
            // tx_rot index p + i - b  ==  phi_t((i - b) T_s - delta)
            received.samples[i] += h * time.samples[src] * tx_rot[p + i - b];
        }
    }
    for (std::size_t i = 0; i < len; ++i) received.samples[i] *= rx_rot[i];

    // Common phase error over the symbol body, for the effective-channel estimate.
    cplx cpe{1.0, 0.0};
    if (cfg.dlc_tracks_cpe) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = cp; i < len; ++i) acc += tx_rot[p + i] * rx_rot[i];
        cpe = acc / static_cast<double>(n);
    }

    const ChannelEstimate est =
        estimate_effective_channel(channel.taps, drv.rotations, cpe, drv.sigma_ee_abs, rng);
    const TimeSymbol cancelled = apply_dlc(received, time, est, cfg.profile.tap_delays);

    const FreqSymbol pre = demodulate(received, cfg.waveform, plan);
    const FreqSymbol post = demodulate(cancelled, cfg.waveform, plan);

    TrialPowers out;
    out.pre.resize(n);
    out.post.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.pre[k] = std::norm(pre.bins[k]);
        out.post[k] = std::norm(post.bins[k]);
    }
    double sp = 0.0, su = 0.0;
    for (std::size_t k : cfg.waveform.active_set) {
        sp += out.pre[k];
        su += out.post[k];
    }
    const double inv_active = 1.0 / static_cast<double>(cfg.waveform.active_set.size());
    out.inband_pre = sp * inv_active;
    out.inband_post = su * inv_active;
    return out;
}

}  // namespace detail

inline TrialPowers run_trial(const ScenarioConfig& cfg, std::size_t trial_index) {
    cfg.validate();
    const detail::SimDerived drv = detail::derive(cfg);
    const DftPlan plan(cfg.waveform.n_subcarriers);
    return detail::run_trial_impl(cfg, drv, plan, trial_index);
}

struct McResult {
    std::vector<double> pre_mean, post_mean;      ///< per-subcarrier linear power
    std::vector<double> pre_stderr, post_stderr;  ///< standard error of the mean
    double inband_pre_mean = 0.0, inband_pre_stderr = 0.0;
    double inband_post_mean = 0.0, inband_post_stderr = 0.0;
    std::size_t trials_run = 0;
    double reference = 1.0;

    double inband_pre_db() const { return 10.0 * std::log10(inband_pre_mean / reference); }
    double inband_post_db() const { return 10.0 * std::log10(inband_post_mean / reference); }
};

inline McResult run_monte_carlo(const ScenarioConfig& cfg, std::size_t trials, std::uint64_t master_seed,
                                unsigned n_threads = 0) {
    ScenarioConfig local = cfg;
    local.trials = trials;
    local.master_seed = master_seed;
    local.validate();
    const detail::SimDerived drv = detail::derive(local);

    const std::size_t n = local.waveform.n_subcarriers;
    constexpr std::size_t kBlock = 32;
    const std::size_t n_blocks = (trials + kBlock - 1) / kBlock;

    struct BlockSums {
        std::vector<double> s_pre, s2_pre, s_post, s2_post;
        double s_ib_pre = 0.0, s2_ib_pre = 0.0, s_ib_post = 0.0, s2_ib_post = 0.0;
    };
    std::vector<BlockSums> blocks(n_blocks);

    std::atomic<std::size_t> next_block{0};
    auto worker = [&]() {
        const DftPlan plan(n);
        for (;;) {
            const std::size_t blk = next_block.fetch_add(1);
            if (blk >= n_blocks) break;
            BlockSums& bs = blocks[blk];
            bs.s_pre.assign(n, 0.0);
            bs.s2_pre.assign(n, 0.0);
            bs.s_post.assign(n, 0.0);
            bs.s2_post.assign(n, 0.0);
            const std::size_t t_end = std::min(trials, (blk + 1) * kBlock);
            for (std::size_t t = blk * kBlock; t < t_end; ++t) {
                const TrialPowers tp = detail::run_trial_impl(local, drv, plan, t);
                for (std::size_t k = 0; k < n; ++k) {
                    bs.s_pre[k] += tp.pre[k];
                    bs.s2_pre[k] += tp.pre[k] * tp.pre[k];
                    bs.s_post[k] += tp.post[k];
                    bs.s2_post[k] += tp.post[k] * tp.post[k];
                }
                bs.s_ib_pre += tp.inband_pre;
                bs.s2_ib_pre += tp.inband_pre * tp.inband_pre;
                bs.s_ib_post += tp.inband_post;
                bs.s2_ib_post += tp.inband_post * tp.inband_post;
            }
        }
    };

    unsigned workers = n_threads != 0 ? n_threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Reduce in block order; float addition order is therefore fixed.
    std::vector<double> s_pre(n, 0.0), s2_pre(n, 0.0), s_post(n, 0.0), s2_post(n, 0.0);
    double s_ib_pre = 0.0, s2_ib_pre = 0.0, s_ib_post = 0.0, s2_ib_post = 0.0;
    for (const BlockSums& bs : blocks) {
        for (std::size_t k = 0; k < n; ++k) {
            s_pre[k] += bs.s_pre[k];
            s2_pre[k] += bs.s2_pre[k];
            s_post[k] += bs.s_post[k];
            s2_post[k] += bs.s2_post[k];
        }
        s_ib_pre += bs.s_ib_pre;
        s2_ib_pre += bs.s2_ib_pre;
        s_ib_post += bs.s_ib_post;
        s2_ib_post += bs.s2_ib_post;
    }

    const double t = static_cast<double>(trials);
    auto stderr_of = [&](double s, double s2) {
        if (trials < 2) return 0.0;
        double var = (s2 - s * s / t) / (t - 1.0);
        if (var < 0.0) var = 0.0;
        return std::sqrt(var / t);
    };

    McResult res;
    res.trials_run = trials;
    res.reference = reference_power(local);
    res.pre_mean.resize(n);
    res.post_mean.resize(n);
    res.pre_stderr.resize(n);
    res.post_stderr.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        res.pre_mean[k] = s_pre[k] / t;
        res.post_mean[k] = s_post[k] / t;
        res.pre_stderr[k] = stderr_of(s_pre[k], s2_pre[k]);
        res.post_stderr[k] = stderr_of(s_post[k], s2_post[k]);
    }
    res.inband_pre_mean = s_ib_pre / t;
    res.inband_post_mean = s_ib_post / t;
    res.inband_pre_stderr = stderr_of(s_ib_pre, s2_ib_pre);
    res.inband_post_stderr = stderr_of(s_ib_post, s2_ib_post);
    return res;
}

}  // namespace fdpn

#pragma once

// Scenario presets and the sweep driver: assembles configurations for the
// canonical result figures, evaluates closed-form and Monte-Carlo inband
// averages against the common reference, and reports analytic-vs-simulation
// agreement.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdpn/analytic.hpp"
#include "fdpn/csv.hpp"
#include "fdpn/simulator.hpp"

namespace fdpn {

enum class PresetKind { Practical, Ideal };

inline const char* preset_name(PresetKind k) { return k == PresetKind::Practical ? "practical" : "ideal"; }
inline const char* oscillator_name(OscillatorKind k) {
    return k == OscillatorKind::Common ? "common" : "independent";
}

enum class SweepAxis { Spectrum, Beta, ChannelDeltaDb, DlcDb, AlcDb, TxRxDelay, Distance };

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::Spectrum: return "subcarrier";
        case SweepAxis::Beta: return "beta_hz";
        case SweepAxis::ChannelDeltaDb: return "channel_delta_db";
        case SweepAxis::DlcDb: return "dlc_db";
        case SweepAxis::AlcDb: return "alc_db";
        case SweepAxis::TxRxDelay: return "tx_rx_delay_s";
        case SweepAxis::Distance: return "distance_m";
    }
    return "?";
}

struct VariantSpec {
    PresetKind preset;
    OscillatorKind oscillator;
    AlcSetting alc;
    DlcSetting dlc;
};

struct SweepSpec {
    std::string name;
    SweepAxis axis = SweepAxis::Spectrum;
    std::vector<double> points;  ///< axis values; single 0 for spectrum figures
    std::vector<VariantSpec> variants;
    double beta_hz = 50.0;  ///< fixed oscillator bandwidth unless the axis is Beta
    OfdmConfig waveform = OfdmConfig::lte_like();
    CouplingProfile profile = CouplingProfile::canonical();
};

namespace detail {

inline AlcSetting practical_alc() { return AlcSetting::from_db(30.0); }
inline DlcSetting practical_dlc() { return DlcSetting{false, std::pow(10.0, -5.0), 0.0}; }

inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i)
        pts[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
    return pts;
}

inline std::vector<double> linear_grid(double lo, double step, std::size_t count) {
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i) pts[i] = lo + step * static_cast<double>(i);
    return pts;
}

inline std::vector<VariantSpec> four_variants(AlcSetting p_alc, DlcSetting p_dlc, AlcSetting i_alc,
                                              DlcSetting i_dlc) {
    return {{PresetKind::Practical, OscillatorKind::Common, p_alc, p_dlc},
            {PresetKind::Practical, OscillatorKind::Independent, p_alc, p_dlc},
            {PresetKind::Ideal, OscillatorKind::Common, i_alc, i_dlc},
            {PresetKind::Ideal, OscillatorKind::Independent, i_alc, i_dlc}};
}

}  // namespace detail

/// Figure presets:
///   fig3/fig4  per-subcarrier residual spectra, beta = 50 Hz, both oscillator
///              kinds (fig3 Practical, fig4 Ideal)
///   fig5       beta sweep {0} u log 0.1 Hz .. 1 kHz (41 points)
///   fig6       reflected-tap power change, -10..+5 dB in 0.5 dB steps
///   fig7       DLC sweep 0..80 dB (ideal-ALC variant keeps the varied DLC)
///   fig8       ALC sweep 0..33 dB (ideal-DLC variant keeps the varied ALC)
///   fig9       TX-RX delay sweep 0.67 ns .. one sample, log grid, 25 points
///   fig10      antenna distance 0.2..20 m, log grid, free-space scaling,
///              best-attainable ALC with ideal DLC
inline SweepSpec preset(const std::string& name) {
    SweepSpec s;
    s.name = name;
    const AlcSetting pa = detail::practical_alc();
    const DlcSetting pd = detail::practical_dlc();
    const AlcSetting ia = AlcSetting::ideal_alc();
    const DlcSetting id = DlcSetting::ideal_dlc();
    if (name == "fig3" || name == "fig4") {
        s.axis = SweepAxis::Spectrum;
        s.points = {0.0};
        const PresetKind kind = name == "fig3" ? PresetKind::Practical : PresetKind::Ideal;
        const AlcSetting alc = kind == PresetKind::Practical ? pa : ia;
        const DlcSetting dlc = kind == PresetKind::Practical ? pd : id;
        s.variants = {{kind, OscillatorKind::Common, alc, dlc},
                      {kind, OscillatorKind::Independent, alc, dlc}};
    } else if (name == "fig5") {
        s.axis = SweepAxis::Beta;
        s.points.push_back(0.0);
        for (double b : detail::log_grid(0.1, 1000.0, 41)) s.points.push_back(b);
        s.variants = detail::four_variants(pa, pd, ia, id);
    } else if (name == "fig6") {
        s.axis = SweepAxis::ChannelDeltaDb;
        s.points = detail::linear_grid(-10.0, 0.5, 31);
        s.variants = detail::four_variants(pa, pd, ia, id);
    } else if (name == "fig7") {
        s.axis = SweepAxis::DlcDb;
        s.points = detail::linear_grid(0.0, 2.5, 33);
        // the axis supplies the DLC value for both variants
        s.variants = detail::four_variants(pa, pd, ia, pd);
    } else if (name == "fig8") {
        s.axis = SweepAxis::AlcDb;
        s.points = detail::linear_grid(0.0, 1.0, 34);
        // the axis supplies the ALC value for both variants
        s.variants = detail::four_variants(pa, pd, pa, id);
    } else if (name == "fig9") {
        s.axis = SweepAxis::TxRxDelay;
        s.points = detail::log_grid(6.6713e-10, 1.0 / 15.36e6, 25);
        s.variants = detail::four_variants(pa, pd, ia, id);
    } else if (name == "fig10") {
        s.axis = SweepAxis::Distance;
        s.points = detail::log_grid(0.2, 20.0, 21);
        s.variants = {{PresetKind::Ideal, OscillatorKind::Common, ia, id},
                      {PresetKind::Ideal, OscillatorKind::Independent, ia, id}};
    } else {
        throw std::invalid_argument("preset: unknown figure name " + name);
    }
    return s;
}

/// Scenario for one (axis value, variant) cell of a sweep.
inline ScenarioConfig make_scenario(const SweepSpec& spec, double axis_value, const VariantSpec& var) {
    ScenarioConfig cfg;
    cfg.waveform = spec.waveform;
    cfg.profile = spec.profile;
    cfg.alc = var.alc;
    cfg.dlc = var.dlc;
    cfg.oscillator.kind = var.oscillator;
    cfg.oscillator.beta_hz = spec.beta_hz;
    switch (spec.axis) {
        case SweepAxis::Spectrum:
            break;
        case SweepAxis::Beta:
            cfg.oscillator.beta_hz = axis_value;
            break;
        case SweepAxis::ChannelDeltaDb: {
            const double scale = std::pow(10.0, axis_value / 10.0);
            for (std::size_t b = 1; b < cfg.profile.tap_powers.size(); ++b)
                cfg.profile.tap_powers[b] *= scale;
            const double refl = cfg.profile.reflected_power();
            cfg.profile.separation = (cfg.profile.main_power() + refl) / (1.0 + refl);
            break;
        }
        case SweepAxis::DlcDb:
            cfg.dlc = DlcSetting{false, std::pow(10.0, -axis_value / 10.0), 0.0};
            break;
        case SweepAxis::AlcDb:
            cfg.alc = AlcSetting::from_db(axis_value, var.alc.error_mode);
            break;
        case SweepAxis::TxRxDelay:
            cfg.profile.main_delay_s = axis_value;
            break;
        case SweepAxis::Distance:
            cfg.profile =
                distance_scaled_profile(spec.profile, axis_value, 0.2, cfg.waveform.sample_interval_s);
            break;
    }
    cfg.oscillator.tx_rx_delay_s = cfg.profile.main_delay_s;
    return cfg;
}

struct AnalyticOutputs {
    PowerSpectrum pre;
    PowerSpectrum post;
    double inband_pre_db = 0.0;
    double inband_post_db = 0.0;
};

/// Closed-form spectra and inband averages for one scenario.
/// Throws InfeasibleAlc / InfeasibleSeparation when the requested suppressions
/// cannot be realized on the profile.
inline AnalyticOutputs analytic_outputs(const ScenarioConfig& cfg) {
    const detail::SimDerived drv = detail::derive(cfg);
    std::vector<double> post_alc = cfg.profile.tap_powers;
    post_alc[0] *= drv.a_prime;
    const std::vector<double> sigma_l2 = active_bin_powers(cfg.waveform);
    AnalyticOutputs out;
    out.pre = si_power_pre_dlc(cfg.waveform, post_alc, cfg.profile.tap_delays, cfg.oscillator, sigma_l2);
    out.post = si_power_post_dlc(cfg.waveform, post_alc, cfg.profile.tap_delays, cfg.oscillator, sigma_l2,
                                 drv.sigma_ee_abs);
    out.pre.reference = reference_power(cfg);
    out.post.reference = out.pre.reference;
    out.inband_pre_db = inband_average(out.pre, cfg.waveform.active_set);
    out.inband_post_db = inband_average(out.post, cfg.waveform.active_set);
    return out;
}

struct FigureResult {
    std::string name;
    SweepAxis axis = SweepAxis::Spectrum;
    SweepResult sweep;                     ///< populated for sweep figures
    std::vector<SpectrumResult> spectra;   ///< populated for spectrum figures
    bool spectrum_output = false;
};

/// Runs a sweep: analytic always, Monte-Carlo when trials > 0. Infeasible
/// cells are reported as rows with feasible = 0. Each cell draws its trials
/// from a seed derived from (master_seed, running cell index).
inline FigureResult run_sweep(const SweepSpec& spec, std::size_t trials, std::uint64_t master_seed) {
    FigureResult fr;
    fr.name = spec.name;
    fr.axis = spec.axis;
    fr.spectrum_output = spec.axis == SweepAxis::Spectrum;
    std::uint64_t cell = 0;
    for (double value : spec.points) {
        for (const VariantSpec& var : spec.variants) {
            const std::uint64_t cell_seed = derive_stream_seed(master_seed, cell++);
            const ScenarioConfig cfg = make_scenario(spec, value, var);
            bool feasible = true;
            AnalyticOutputs an;
            try {
                an = analytic_outputs(cfg);
            } catch (const InfeasibleAlc&) {
                feasible = false;
            } catch (const InfeasibleSeparation&) {
                feasible = false;
            }

            std::optional<McResult> mc;
            if (feasible && trials > 0) mc = run_monte_carlo(cfg, trials, cell_seed);

            if (fr.spectrum_output) {
                SpectrumResult sr;
                sr.label = std::string(preset_name(var.preset)) + "_" + oscillator_name(var.oscillator);
                const std::size_t n = cfg.waveform.n_subcarriers;
                const long half = static_cast<long>(n / 2);
                for (long c = -half; c < half; ++c) {
                    const std::size_t k = static_cast<std::size_t>((c + static_cast<long>(n)) % static_cast<long>(n));
                    SpectrumRow row;
                    row.subcarrier_index = c;
                    row.analytic_db = an.post.db(k);
                    if (mc) {
                        row.has_sim = true;
                        row.sim_db = 10.0 * std::log10(mc->post_mean[k] / mc->reference);
                        row.sim_stderr_db = mc->post_mean[k] > 0.0
                                                ? (10.0 / std::numbers::ln10) * mc->post_stderr[k] / mc->post_mean[k]
                                                : 0.0;
                    }
                    sr.rows.push_back(row);
                }
                fr.spectra.push_back(std::move(sr));
            } else {
                SweepRow row;
                row.axis_name = axis_name(spec.axis);
                row.axis_value = value;
                row.preset = preset_name(var.preset);
                row.oscillator = oscillator_name(var.oscillator);
                row.feasible = feasible;
                row.trials = mc ? trials : 0;
                if (feasible) {
                    row.analytic_db = an.inband_post_db;
                    if (mc) {
                        row.has_sim = true;
                        row.sim_db = mc->inband_post_db();
                        row.sim_stderr_db = mc->inband_post_mean > 0.0
                                                ? (10.0 / std::numbers::ln10) * mc->inband_post_stderr /
                                                      mc->inband_post_mean
                                                : 0.0;
                    }
                }
                fr.sweep.rows.push_back(std::move(row));
            }
        }
    }
    return fr;
}

/// Max/mean |analytic - sim| per variant; rows above 0.5 dB are flagged.
inline std::string compare_report(const SweepResult& result) {
    struct Agg {
        std::string key;
        double max_abs = 0.0;
        double sum_abs = 0.0;
        std::size_t count = 0;
    };
    std::vector<Agg> aggs;
    std::vector<std::string> flagged;
    bool any_sim = false;
    for (const SweepRow& r : result.rows) {
        if (!r.feasible || !r.has_sim) continue;
        any_sim = true;
        const double d = std::abs(r.analytic_db - r.sim_db);
        const std::string key = r.preset + "/" + r.oscillator;
        Agg* agg = nullptr;
        for (Agg& a : aggs)
            if (a.key == key) agg = &a;
        if (!agg) {
            aggs.push_back(Agg{key, 0.0, 0.0, 0});
            agg = &aggs.back();
        }
        agg->max_abs = std::max(agg->max_abs, d);
        agg->sum_abs += d;
        agg->count += 1;
        if (d > 0.5) {
            std::ostringstream os;
            os << key << " @ " << r.axis_name << "=" << r.axis_value << ": |delta|=" << d << " dB";
            flagged.push_back(os.str());
        }
    }
    if (!any_sim) throw std::invalid_argument("compare_report: no simulation columns");
    std::ostringstream os;
    for (const Agg& a : aggs)
        os << a.key << ": n=" << a.count << " max|delta|=" << a.max_abs
           << " dB mean|delta|=" << a.sum_abs / static_cast<double>(a.count) << " dB\n";
    if (flagged.empty()) {
        os << "rows above 0.5 dB: none\n";
    } else {
        os << "rows above 0.5 dB:\n";
        for (const std::string& f : flagged) os << "  " << f << '\n';
    }
    return os.str();
}

/// Per-bin agreement summary for a spectrum result.
inline std::string compare_report(const SpectrumResult& result) {
    double max_abs = 0.0, sum_abs = 0.0;
    std::size_t count = 0;
    for (const SpectrumRow& r : result.rows) {
        if (!r.has_sim) continue;
        if (!std::isfinite(r.analytic_db) || !std::isfinite(r.sim_db)) continue;
        const double d = std::abs(r.analytic_db - r.sim_db);
        max_abs = std::max(max_abs, d);
        sum_abs += d;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("compare_report: no simulation columns");
    std::ostringstream os;
    os << (result.label.empty() ? "spectrum" : result.label) << ": bins=" << count
       << " max|delta|=" << max_abs << " dB mean|delta|=" << sum_abs / static_cast<double>(count)
       << " dB\n";
    return os.str();
}

}  // namespace fdpn

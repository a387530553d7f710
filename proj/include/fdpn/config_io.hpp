#pragma once

// JSON scenario configuration. Unknown keys are hard errors.
//
// {
//   "waveform":  {"n_subcarriers": 1024, "active_per_side": 300, "cp_len": 63,
//                 "sample_rate_hz": 15.36e6, "carrier_hz": 1.875e9},
//   "channel":   {"delays_samples": [0,1,2,4], "powers_db": [-30,-65,-70,-75],
//                 "separation_db": 30, "main_delay_s": 6.6713e-10},
//   "oscillator":{"kind": "common", "beta_hz": 50},
//   "alc":       "ideal" | {"db": 30, "error_mode": "amplitude"|"phase"|"split"},
//   "dlc":       "ideal" | {"db": 50},
//   "sim":       {"trials": 1000, "seed": 1}
// }

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdpn/simulator.hpp"

namespace fdpn {

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument("config: unknown key \"" + item.key() + "\" in " + where);
}

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& where,
                                     const std::string& key) {
    if (!obj.contains(key))
        throw std::invalid_argument("config: missing key \"" + key + "\" in " + where);
    return obj.at(key);
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    detail::require_keys(j, "root", {"waveform", "channel", "oscillator", "alc", "dlc", "sim"});
    ScenarioConfig cfg;

    const auto& wf = detail::require(j, "root", "waveform");
    detail::require_keys(wf, "waveform",
                         {"n_subcarriers", "active_per_side", "cp_len", "sample_rate_hz", "carrier_hz"});
    const auto n = detail::require(wf, "waveform", "n_subcarriers").get<std::size_t>();
    const auto per_side = detail::require(wf, "waveform", "active_per_side").get<std::size_t>();
    const auto sample_rate = detail::require(wf, "waveform", "sample_rate_hz").get<double>();
    cfg.waveform.n_subcarriers = n;
    cfg.waveform.active_set = OfdmConfig::symmetric_active_set(n, per_side);
    cfg.waveform.cp_len = detail::require(wf, "waveform", "cp_len").get<std::size_t>();
    cfg.waveform.sample_interval_s = 1.0 / sample_rate;
    cfg.waveform.subcarrier_spacing_hz = sample_rate / static_cast<double>(n);
    cfg.waveform.carrier_freq_hz = detail::require(wf, "waveform", "carrier_hz").get<double>();

    const auto& ch = detail::require(j, "root", "channel");
    detail::require_keys(ch, "channel", {"delays_samples", "powers_db", "separation_db", "main_delay_s"});
    const auto delays = detail::require(ch, "channel", "delays_samples").get<std::vector<std::size_t>>();
    const auto powers_db = detail::require(ch, "channel", "powers_db").get<std::vector<double>>();
    if (delays.size() != powers_db.size())
        throw std::invalid_argument("config: channel delays/powers size mismatch");
    std::vector<double> powers(powers_db.size());
    for (std::size_t i = 0; i < powers.size(); ++i) powers[i] = std::pow(10.0, powers_db[i] / 10.0);
    const double sep_db = detail::require(ch, "channel", "separation_db").get<double>();
    const double delta = detail::require(ch, "channel", "main_delay_s").get<double>();
    cfg.profile = CouplingProfile::from_sparse(delays, powers, std::pow(10.0, -sep_db / 10.0), delta);

    const auto& osc = detail::require(j, "root", "oscillator");
    detail::require_keys(osc, "oscillator", {"kind", "beta_hz"});
    const auto kind = detail::require(osc, "oscillator", "kind").get<std::string>();
    if (kind == "common") {
        cfg.oscillator.kind = OscillatorKind::Common;
    } else if (kind == "independent") {
        cfg.oscillator.kind = OscillatorKind::Independent;
    } else {
        throw std::invalid_argument("config: oscillator kind must be \"common\" or \"independent\"");
    }
    cfg.oscillator.beta_hz = detail::require(osc, "oscillator", "beta_hz").get<double>();
    cfg.oscillator.tx_rx_delay_s = cfg.profile.main_delay_s;

    const auto& alc = detail::require(j, "root", "alc");
    if (alc.is_string()) {
        if (alc.get<std::string>() != "ideal")
            throw std::invalid_argument("config: alc string value must be \"ideal\"");
        cfg.alc = AlcSetting::ideal_alc();
    } else {
        detail::require_keys(alc, "alc", {"db", "error_mode"});
        AlcErrorMode mode = AlcErrorMode::PureAmplitude;
        if (alc.contains("error_mode")) {
            const auto m = alc.at("error_mode").get<std::string>();
            if (m == "amplitude") {
                mode = AlcErrorMode::PureAmplitude;
            } else if (m == "phase") {
                mode = AlcErrorMode::PurePhase;
            } else if (m == "split") {
                mode = AlcErrorMode::Split;
            } else {
                throw std::invalid_argument("config: alc error_mode must be amplitude|phase|split");
            }
        }
        cfg.alc = AlcSetting::from_db(detail::require(alc, "alc", "db").get<double>(), mode);
    }

    const auto& dlc = detail::require(j, "root", "dlc");
    if (dlc.is_string()) {
        if (dlc.get<std::string>() != "ideal")
            throw std::invalid_argument("config: dlc string value must be \"ideal\"");
        cfg.dlc = DlcSetting::ideal_dlc();
    } else {
        detail::require_keys(dlc, "dlc", {"db"});
        cfg.dlc = DlcSetting{false, std::pow(10.0, -detail::require(dlc, "dlc", "db").get<double>() / 10.0),
                             0.0};
    }

    cfg.trials = 1000;
    cfg.master_seed = 1;
    if (j.contains("sim")) {
        const auto& sim = j.at("sim");
        detail::require_keys(sim, "sim", {"trials", "seed"});
        if (sim.contains("trials")) cfg.trials = sim.at("trials").get<std::size_t>();
        if (sim.contains("seed")) cfg.master_seed = sim.at("seed").get<std::uint64_t>();
    }

    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    return scenario_from_json(j);
}

}  // namespace fdpn

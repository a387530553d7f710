// fdpn: phase-noise limits on full-duplex self-interference cancellation.
//
//   fdpn figure <fig3..fig10> [--trials N] [--seed S] [--out PATH] [--analytic-only]
//   fdpn run --config FILE.json [--trials N] [--seed S] [--out PATH] [--analytic-only]
//   fdpn compare --in PATH
//   fdpn phase --beta HZ --n SAMPLES [--seed S] [--out PATH]

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdpn/config_io.hpp"
#include "fdpn/csv.hpp"
#include "fdpn/experiments.hpp"
#include "fdpn/phase_noise.hpp"
#include "fdpn/simulator.hpp"

namespace {

std::string with_label(const std::string& path, const std::string& label) {
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + label;
    return path.substr(0, dot) + "_" + label + path.substr(dot);
}

void write_figure(const fdpn::FigureResult& fr, const std::string& out) {
    if (fr.spectrum_output) {
        const bool single = fr.spectra.size() == 1;
        for (const auto& sr : fr.spectra) {
            const std::string path = single ? out : with_label(out, sr.label);
            fdpn::emit_csv(sr, path);
            std::cout << "wrote " << path << "\n";
        }
    } else {
        fdpn::emit_csv(fr.sweep, out);
        std::cout << "wrote " << out << "\n";
    }
}

void print_agreement(const fdpn::FigureResult& fr) {
    try {
        if (fr.spectrum_output) {
            for (const auto& sr : fr.spectra) std::cout << fdpn::compare_report(sr);
        } else {
            std::cout << fdpn::compare_report(fr.sweep);
        }
    } catch (const std::invalid_argument&) {
        // analytic-only run, nothing to compare
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillator phase-noise limits on full-duplex SI cancellation"};
    app.require_subcommand(1);

    std::string fig_name;
    std::size_t trials = 1000;
    std::uint64_t seed = 12345;
    std::string out_path;
    bool analytic_only = false;

    CLI::App* fig = app.add_subcommand("figure", "run a canonical figure preset");
    fig->add_option("name", fig_name, "fig3..fig10")->required();
    fig->add_option("--trials", trials, "Monte-Carlo trials per point");
    fig->add_option("--seed", seed, "master seed");
    fig->add_option("--out", out_path, "output CSV path");
    fig->add_flag("--analytic-only", analytic_only, "skip the Monte-Carlo runs");

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run a single JSON-configured scenario");
    run->add_option("--config", config_path, "JSON scenario file")->required();
    run->add_option("--trials", trials, "override configured trials");
    run->add_option("--seed", seed, "override configured seed");
    run->add_option("--out", out_path, "output CSV path");
    run->add_flag("--analytic-only", analytic_only, "skip the Monte-Carlo run");

    std::string in_path;
    CLI::App* cmp = app.add_subcommand("compare", "analytic-vs-simulation report for an emitted CSV");
    cmp->add_option("--in", in_path, "CSV file produced by figure/run")->required();

    double beta = 50.0;
    std::size_t n_samples = 1024;
    CLI::App* phase = app.add_subcommand("phase", "dump one oscillator phase trajectory as CSV");
    phase->add_option("--beta", beta, "3-dB bandwidth in Hz")->required();
    phase->add_option("--n", n_samples, "number of samples");
    phase->add_option("--seed", seed, "seed");
    phase->add_option("--out", out_path, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fig->parsed()) {
            const fdpn::SweepSpec spec = fdpn::preset(fig_name);
            const std::size_t t = analytic_only ? 0 : trials;
            const fdpn::FigureResult fr = fdpn::run_sweep(spec, t, seed);
            write_figure(fr, out_path.empty() ? fig_name + ".csv" : out_path);
            print_agreement(fr);
        } else if (run->parsed()) {
            fdpn::ScenarioConfig cfg = fdpn::load_scenario(config_path);
            if (run->count("--trials") > 0) cfg.trials = trials;
            if (run->count("--seed") > 0) cfg.master_seed = seed;
            const fdpn::AnalyticOutputs an = fdpn::analytic_outputs(cfg);
            std::printf("analytic inband before DLC: %.3f dB\n", an.inband_pre_db);
            std::printf("analytic inband after DLC:  %.3f dB\n", an.inband_post_db);

            fdpn::SpectrumResult sr;
            sr.label = "scenario";
            const std::size_t n = cfg.waveform.n_subcarriers;
            const long half = static_cast<long>(n / 2);
            std::optional<fdpn::McResult> mc;
            if (!analytic_only && cfg.trials > 0)
                mc = fdpn::run_monte_carlo(cfg, cfg.trials, cfg.master_seed);
            if (mc) {
                std::printf("simulated inband before DLC: %.3f dB\n", mc->inband_pre_db());
                std::printf("simulated inband after DLC:  %.3f dB (%zu trials)\n", mc->inband_post_db(),
                            mc->trials_run);
            }
            for (long c = -half; c < half; ++c) {
                const std::size_t k =
                    static_cast<std::size_t>((c + static_cast<long>(n)) % static_cast<long>(n));
                fdpn::SpectrumRow row;
                row.subcarrier_index = c;
                row.analytic_db = an.post.db(k);
                if (mc) {
                    row.has_sim = true;
                    row.sim_db = 10.0 * std::log10(mc->post_mean[k] / mc->reference);
                    row.sim_stderr_db =
                        mc->post_mean[k] > 0.0
                            ? (10.0 / std::numbers::ln10) * mc->post_stderr[k] / mc->post_mean[k]
                            : 0.0;
                }
                sr.rows.push_back(row);
            }
            const std::string path = out_path.empty() ? "scenario.csv" : out_path;
            fdpn::emit_csv(sr, path);
            std::cout << "wrote " << path << "\n";
        } else if (cmp->parsed()) {
            if (fdpn::is_sweep_csv(in_path)) {
                std::cout << fdpn::compare_report(fdpn::parse_sweep_csv(in_path));
            } else {
                std::cout << fdpn::compare_report(fdpn::parse_spectrum_csv(in_path));
            }
        } else if (phase->parsed()) {
            fdpn::RandomStream rng(seed);
            fdpn::OscillatorScenario sc{fdpn::OscillatorKind::Independent, beta, 0.0};
            const fdpn::PhaseStreams ps = fdpn::build_streams(sc, n_samples, 0, 1.0 / 15.36e6, rng);
            const std::string path = out_path.empty() ? "phase.csv" : out_path;
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open " + path);
            out << "sample_index,phase_rad\n";
            for (std::size_t i = 0; i < n_samples; ++i)
                out << i << ',' << fdpn::fmt17(ps.rx(i)) << '\n';
            std::cout << "wrote " << path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

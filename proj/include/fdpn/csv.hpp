#pragma once

// CSV emission and parsing for sweep and spectrum results.
// UTF-8, LF line endings, comma separator, '.' decimal point, 17 significant
// digits, so emitted doubles round-trip exactly. Missing values (analytic-only
// runs, infeasible rows) are empty fields.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdpn {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SweepRow {
    std::string axis_name;
    double axis_value = 0.0;
    std::string preset;      ///< "practical" | "ideal"
    std::string oscillator;  ///< "common" | "independent"
    double analytic_db = 0.0;
    double sim_db = 0.0;
    double sim_stderr_db = 0.0;
    bool has_sim = false;
    std::size_t trials = 0;
    bool feasible = true;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct SpectrumRow {
    long subcarrier_index = 0;  ///< centered, in [-N/2, N/2)
    double analytic_db = 0.0;
    double sim_db = 0.0;
    double sim_stderr_db = 0.0;
    bool has_sim = false;
};

struct SpectrumResult {
    std::string label;  ///< e.g. "practical_common"
    std::vector<SpectrumRow> rows;
};

inline constexpr const char* kSweepHeader =
    "axis_name,axis_value,preset,oscillator,analytic_inband_db,sim_inband_db,sim_stderr_db,trials,"
    "feasible";
inline constexpr const char* kSpectrumHeader = "subcarrier_index,analytic_db,sim_mean_db,sim_stderr_db";

inline void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << kSweepHeader << '\n';
    for (const SweepRow& r : result.rows) {
        out << r.axis_name << ',' << fmt17(r.axis_value) << ',' << r.preset << ',' << r.oscillator << ',';
        if (r.feasible) out << fmt17(r.analytic_db);
        out << ',';
        if (r.feasible && r.has_sim) out << fmt17(r.sim_db);
        out << ',';
        if (r.feasible && r.has_sim) out << fmt17(r.sim_stderr_db);
        out << ',' << r.trials << ',' << (r.feasible ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

inline void emit_csv(const SpectrumResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << kSpectrumHeader << '\n';
    for (const SpectrumRow& r : result.rows) {
        out << r.subcarrier_index << ',' << fmt17(r.analytic_db) << ',';
        if (r.has_sim) out << fmt17(r.sim_db);
        out << ',';
        if (r.has_sim) out << fmt17(r.sim_stderr_db);
        out << '\n';
    }
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_double(const std::string& s) {
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    return std::stod(s);
}

}  // namespace detail

inline SweepResult parse_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("parse_sweep_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader)
        throw std::runtime_error("parse_sweep_csv: unexpected header in " + path);
    SweepResult res;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 9) throw std::runtime_error("parse_sweep_csv: malformed row in " + path);
        SweepRow r;
        r.axis_name = f[0];
        r.axis_value = detail::parse_double(f[1]);
        r.preset = f[2];
        r.oscillator = f[3];
        r.feasible = f[8] == "1";
        if (!f[4].empty()) r.analytic_db = detail::parse_double(f[4]);
        r.has_sim = !f[5].empty();
        if (r.has_sim) {
            r.sim_db = detail::parse_double(f[5]);
            r.sim_stderr_db = detail::parse_double(f[6]);
        }
        r.trials = static_cast<std::size_t>(std::stoull(f[7]));
        res.rows.push_back(std::move(r));
    }
    return res;
}

inline SpectrumResult parse_spectrum_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("parse_spectrum_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kSpectrumHeader)
        throw std::runtime_error("parse_spectrum_csv: unexpected header in " + path);
    SpectrumResult res;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 4) throw std::runtime_error("parse_spectrum_csv: malformed row in " + path);
        SpectrumRow r;
        r.subcarrier_index = std::stol(f[0]);
        r.analytic_db = detail::parse_double(f[1]);
        r.has_sim = !f[2].empty();
        if (r.has_sim) {
            r.sim_db = detail::parse_double(f[2]);
            r.sim_stderr_db = detail::parse_double(f[3]);
        }
        res.rows.push_back(r);
    }
    return res;
}

/// Reads the header line only, to dispatch on schema.
inline bool is_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line == kSweepHeader) return true;
    if (line == kSpectrumHeader) return false;
    throw std::runtime_error("unrecognized CSV header in " + path);
}

}  // namespace fdpn

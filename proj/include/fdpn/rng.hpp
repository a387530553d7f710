#pragma once

// Deterministic random streams for Monte-Carlo trials.
//
// Every trial owns a private stream derived from (master_seed, trial_index)
// through a splitmix64 step, so trials can execute in any order and on any
// number of threads while reproducing the serial run bit for bit.

#include <cstdint>
#include <random>
#include <utility>

namespace fdpn {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Seed of sub-stream `index` of `master`: one splitmix64 output of
/// master + (index + 1) * golden-ratio constant.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master + (index + 1) * 0x9e3779b97f4a7c15ull;
    return splitmix64(s);
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0, 1), 53 significant bits.
    double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via the polar (Marsaglia) method; the second value of
    /// each generated pair is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto [g0, g1] = gaussian_pair();
        spare_ = g1;
        have_spare_ = true;
        return g0;
    }

    std::pair<double, double> gaussian_pair() {
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        return {u * f, v * f};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline RandomStream trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RandomStream(derive_stream_seed(master_seed, trial_index));
}

}  // namespace fdpn

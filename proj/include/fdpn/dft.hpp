#pragma once

// Discrete Fourier transform, convention:
//   forward:  X[k] = sum_n x[n] e^{-j 2 pi k n / N}   (unscaled)
//   inverse:  x[n] = (1/N) sum_k X[k] e^{+j 2 pi k n / N}
//
// Power-of-two sizes run on an iterative radix-2 transform, anything else
// falls back to direct summation (only small sizes occur in practice).

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace fdpn {

using cplx = std::complex<double>;

class DftPlan {
public:
    explicit DftPlan(std::size_t n) : n_(n) {
        if (n_ == 0) throw std::invalid_argument("DftPlan: size must be positive");
        twiddle_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const double phi = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
            twiddle_[k] = {std::cos(phi), std::sin(phi)};
        }
        if (radix2()) {
            bitrev_.resize(n_);
            std::size_t log2n = 0;
            while ((std::size_t{1} << log2n) < n_) ++log2n;
            for (std::size_t i = 0; i < n_; ++i) {
                std::size_t r = 0;
                for (std::size_t b = 0; b < log2n; ++b)
                    if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
                bitrev_[i] = r;
            }
        }
    }

    std::size_t size() const { return n_; }

    std::vector<cplx> forward(std::span<const cplx> x) const { return transform(x, false); }

    std::vector<cplx> inverse(std::span<const cplx> x) const {
        std::vector<cplx> out = transform(x, true);
        const double scale = 1.0 / static_cast<double>(n_);
        for (auto& v : out) v *= scale;
        return out;
    }

private:
    bool radix2() const { return n_ >= 2 && (n_ & (n_ - 1)) == 0; }

    std::vector<cplx> transform(std::span<const cplx> x, bool inv) const {
        if (x.size() != n_) throw std::invalid_argument("DftPlan: input length mismatch");
        if (!radix2()) return direct(x, inv);
        std::vector<cplx> a(n_);
        for (std::size_t i = 0; i < n_; ++i) a[bitrev_[i]] = x[i];
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t stride = n_ / len;
            const std::size_t half = len / 2;
            for (std::size_t base = 0; base < n_; base += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    cplx w = twiddle_[k * stride];
                    if (inv) w = std::conj(w);
                    const cplx t = w * a[base + k + half];
                    const cplx u = a[base + k];
                    a[base + k] = u + t;
                    a[base + k + half] = u - t;
                }
            }
        }
        return a;
    }

    std::vector<cplx> direct(std::span<const cplx> x, bool inv) const {
        std::vector<cplx> out(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            cplx acc{0.0, 0.0};
            for (std::size_t n = 0; n < n_; ++n) {
                cplx w = twiddle_[(k * n) % n_];
                if (inv) w = std::conj(w);
                acc += x[n] * w;
            }
            out[k] = acc;
        }
        return out;
    }

    std::size_t n_;
    std::vector<cplx> twiddle_;
    std::vector<std::size_t> bitrev_;
};

inline std::vector<cplx> dft(std::span<const cplx> x) { return DftPlan(x.size()).forward(x); }

inline std::vector<cplx> idft(std::span<const cplx> x) { return DftPlan(x.size()).inverse(x); }

}  // namespace fdpn

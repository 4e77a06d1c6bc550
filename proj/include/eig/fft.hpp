#pragma once

#include <bit>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace eig {

// In-place iterative radix-2 FFT with a precomputed twiddle table.  Sizes are
// powers of two.  This is deliberately self-contained: transform sizes here
// top out around 2^23 and the chirp-z driver reuses plans, so a tuned
// external FFT buys nothing that matters.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n < 2 || !std::has_single_bit(n)) throw std::invalid_argument("Fft: size must be a power of two >= 2");
        twiddle_.resize(n / 2);
        const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
        for (std::size_t k = 0; k < n / 2; ++k)
            twiddle_[k] = std::polar(1.0, step * static_cast<double>(k));
        bitrev_.resize(n);
        const int bits = std::countr_zero(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
            bitrev_[i] = r;
        }
    }

    std::size_t size() const { return n_; }

    void forward(std::vector<std::complex<double>>& a) const { run(a, false); }
    void inverse(std::vector<std::complex<double>>& a) const {
        run(a, true);
        const double s = 1.0 / static_cast<double>(n_);
        for (auto& v : a) v *= s;
    }

private:
    void run(std::vector<std::complex<double>>& a, bool inv) const {
        if (a.size() != n_) throw std::invalid_argument("Fft: buffer size mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = bitrev_[i];
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t stride = n_ / len;
            for (std::size_t blk = 0; blk < n_; blk += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    std::complex<double> w = twiddle_[k * stride];
                    if (inv) w = std::conj(w);
                    const std::complex<double> t = a[blk + k + half] * w;
                    a[blk + k + half] = a[blk + k] - t;
                    a[blk + k] += t;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<std::complex<double>> twiddle_;
    std::vector<std::size_t> bitrev_;
};

} // namespace eig

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "eig/errors.hpp"
#include "eig/fft.hpp"

namespace eig {

// Symmetric frequency window [-W, W] sampled on n_samples uniform intervals
// (n_samples+1 points, both endpoints included).  The window stands in for
// the infinite integration range, so inputs must have decayed at its edges;
// edge_tol is the allowed edge-to-peak magnitude ratio.
struct FrequencyWindow {
    double half_width = 0.0;
    std::size_t n_samples = 1u << 14;
    double edge_tol = 1e-6;

    std::size_t n_points() const { return n_samples + 1; }
    double domega() const { return 2.0 * half_width / static_cast<double>(n_samples); }
    double omega(std::size_t k) const { return -half_width + static_cast<double>(k) * domega(); }
    // Period of the time-domain images implied by the sampling step; content
    // beyond it wraps around.
    double alias_period() const { return 2.0 * std::numbers::pi / domega(); }

    void validate() const {
        if (!(half_width > 0.0)) throw config_error("FrequencyWindow: half_width must be > 0");
        if (n_samples < 16 || !std::has_single_bit(n_samples))
            throw config_error("FrequencyWindow: n_samples must be a power of two >= 16");
        if (!(edge_tol > 0.0)) throw config_error("FrequencyWindow: edge_tol must be > 0");
    }

    std::vector<double> grid() const {
        std::vector<double> w(n_points());
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = omega(k);
        return w;
    }
};

// A complex-valued function sampled on a uniform, sorted frequency grid.
struct ComplexSpectrum {
    std::vector<double> omega_grid;
    std::vector<std::complex<double>> values;

    void validate() const {
        if (omega_grid.size() != values.size() || omega_grid.size() < 2)
            throw config_error("ComplexSpectrum: grid/value size mismatch");
        const double step = omega_grid[1] - omega_grid[0];
        if (!(step > 0.0)) throw config_error("ComplexSpectrum: grid not increasing");
        for (std::size_t i = 1; i < omega_grid.size(); ++i) {
            const double s = omega_grid[i] - omega_grid[i - 1];
            if (std::abs(s - step) > 1e-9 * std::abs(step))
                throw config_error("ComplexSpectrum: grid not uniform");
        }
    }
};

namespace detail {

inline bool uniform_step(std::span<const double> t, double& step) {
    if (t.size() < 2) {
        step = 0.0;
        return true;
    }
    step = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - step) > 1e-9 * std::max(std::abs(step), 1e-300)) return false;
    return true;
}

} // namespace detail

// Evaluates F(t_j) = sum_k w_k f_k exp(-i sign s_k t_j) * ds over a uniform
// sample grid s_k (trapezoid weights w) for a uniform output grid t_j.
// Chirp-z (Bluestein) through the FFT for large problems, direct summation
// for small ones.  The chirp tables depend only on the grids, so a plan is
// built once and reused across many integrands (one per quadrature node).
class FourierQuadrature {
public:
    FourierQuadrature(double s0, double ds, std::size_t n_in, std::span<const double> t, double sign = 1.0)
        : s0_(s0), ds_(ds), n_in_(n_in), sign_(sign), t_(t.begin(), t.end()) {
        if (n_in_ < 2) throw config_error("FourierQuadrature: need at least 2 samples");
        if (t_.empty()) return;
        if (!detail::uniform_step(t_, dt_)) throw config_error("FourierQuadrature: output grid not uniform");
        direct_ = n_in_ * t_.size() <= (1u << 21);
        if (!direct_) prepare_bluestein();
    }

    std::size_t input_size() const { return n_in_; }

    std::vector<std::complex<double>> transform(std::span<const std::complex<double>> f) const {
        if (f.size() != n_in_) throw config_error("FourierQuadrature: sample count mismatch");
        if (t_.empty()) return {};
        return direct_ ? transform_direct(f) : transform_bluestein(f);
    }

private:
    static std::complex<double> cis(double phi) { return {std::cos(phi), std::sin(phi)}; }

    std::vector<std::complex<double>> transform_direct(std::span<const std::complex<double>> f) const {
        std::vector<std::complex<double>> out(t_.size());
        for (std::size_t j = 0; j < t_.size(); ++j) {
            const double t = t_[j];
            const std::complex<double> rot = cis(-sign_ * ds_ * t);
            std::complex<double> ph = cis(-sign_ * s0_ * t);
            std::complex<double> acc = 0.5 * f[0] * ph;
            for (std::size_t k = 1; k + 1 < n_in_; ++k) {
                ph *= rot;
                acc += f[k] * ph;
            }
            ph *= rot;
            acc += 0.5 * f[n_in_ - 1] * ph;
            out[j] = acc * ds_;
        }
        return out;
    }

    void prepare_bluestein() {
        const std::size_t m = t_.size();
        std::size_t p = 1;
        while (p < n_in_ + m - 1) p <<= 1;
        fft_ = std::make_shared<Fft>(p);
        c_ = sign_ * ds_ * dt_;
        // a_k pre-phase: exp(-i sign k ds t0) * exp(-i c k^2 / 2)
        a_phase_.resize(n_in_);
        for (std::size_t k = 0; k < n_in_; ++k) {
            const double kk = static_cast<double>(k);
            a_phase_[k] = cis(-sign_ * kk * ds_ * t_[0] - 0.5 * c_ * kk * kk);
        }
        // chirp b_m = exp(+i c m^2 / 2), m in [-(K-1), M-1], wrapped into the FFT buffer
        bhat_.assign(p, {0.0, 0.0});
        const std::size_t span = std::max(n_in_, m);
        for (std::size_t i = 0; i < span; ++i) {
            const double ii = static_cast<double>(i);
            const std::complex<double> b = cis(0.5 * c_ * ii * ii);
            if (i < m) bhat_[i] = b;
            if (i > 0 && i < n_in_) bhat_[p - i] = b;
        }
        fft_->forward(bhat_);
    }

    std::vector<std::complex<double>> transform_bluestein(std::span<const std::complex<double>> f) const {
        const std::size_t m = t_.size();
        std::vector<std::complex<double>> buf(fft_->size(), {0.0, 0.0});
        for (std::size_t k = 0; k < n_in_; ++k) {
            const double w = (k == 0 || k == n_in_ - 1) ? 0.5 : 1.0;
            buf[k] = w * f[k] * a_phase_[k];
        }
        fft_->forward(buf);
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= bhat_[i];
        fft_->inverse(buf);
        std::vector<std::complex<double>> out(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double jj = static_cast<double>(j);
            out[j] = ds_ * buf[j] * cis(-sign_ * s0_ * t_[j] - 0.5 * c_ * jj * jj);
        }
        return out;
    }

    double s0_, ds_;
    std::size_t n_in_;
    double sign_;
    std::vector<double> t_;
    double dt_ = 0.0;
    bool direct_ = true;
    double c_ = 0.0;
    std::shared_ptr<Fft> fft_;
    std::vector<std::complex<double>> a_phase_;
    std::vector<std::complex<double>> bhat_;
};

// Windowed Fourier integral  F(tau) = int_{-W}^{W} f(omega) e^{-i omega tau} domega
// for every tau in tau_grid (uniform).  Asserts that f has decayed at the
// window edges; failure means the caller must enlarge half_width.
// Edge envelope over the outermost samples on each side, relative to the
// peak; a single edge point can sit at a zero of an oscillatory kernel and
// pass by accident.
inline double edge_ratio(std::span<const std::complex<double>> f) {
    double peak = 0.0;
    for (const auto& v : f) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    const std::size_t m = std::min<std::size_t>(8, f.size() / 2);
    double edge = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        edge = std::max({edge, std::abs(f[i]), std::abs(f[f.size() - 1 - i])});
    return edge / peak;
}

inline std::vector<std::complex<double>> oscillatory_ft(const ComplexSpectrum& f,
                                                        std::span<const double> tau_grid,
                                                        double edge_tol = 1e-6) {
    f.validate();
    const double edge = edge_ratio(f.values);
    if (edge > edge_tol)
        throw numerical_error("oscillatory_ft: window too narrow (edge magnitude " +
                              std::to_string(edge) + " of peak exceeds edge_tol " +
                              std::to_string(edge_tol) + "); enlarge half_width");
    const double ds = f.omega_grid[1] - f.omega_grid[0];
    FourierQuadrature plan(f.omega_grid.front(), ds, f.omega_grid.size(), tau_grid);
    return plan.transform(f.values);
}

inline std::vector<std::complex<double>> oscillatory_ft(const FrequencyWindow& win,
                                                        std::span<const std::complex<double>> values,
                                                        std::span<const double> tau_grid) {
    win.validate();
    ComplexSpectrum f{win.grid(), {values.begin(), values.end()}};
    return oscillatory_ft(f, tau_grid, win.edge_tol);
}

} // namespace eig

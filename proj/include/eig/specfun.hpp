#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eig/errors.hpp"

namespace eig {

namespace detail {

// Hankel asymptotic series for J0/Y0.  P0 ~ 1 - 9/(128 z^2) + ...,
// Q0 ~ -1/(8z) + 75/(1024 z^3) - ...; both truncated at their smallest term.
// Only used for z >= ~20 where they reach ~1e-12.
inline std::pair<double, double> bessel_pq0(double z) {
    const double z2 = z * z;
    double p = 1.0, q = 0.0;
    double c = 1.0;           // c_m = prod_{j<=m} (2j-1)^2 / (m! 8^m)
    double last_p = 1.0, last_q = 1.0;
    for (int m = 1; m < 40; ++m) {
        const double odd = 2.0 * m - 1.0;
        c *= odd * odd / (8.0 * m);
        const double term = c / std::pow(z, m);
        if (m % 2 == 1) {
            if (term > last_q) break;   // divergence onset
            q += ((m / 2) % 2 == 0 ? -1.0 : 1.0) * term;
            last_q = term;
        } else {
            if (term > last_p) break;
            p += ((m / 2) % 2 == 0 ? 1.0 : -1.0) * term;
            last_p = term;
        }
    }
    return {p, q};
}

inline double bessel_y0_asymptotic(double z) {
    auto [p, q] = bessel_pq0(z);
    const double chi = z - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * z)) * (p * std::sin(chi) + q * std::cos(chi));
}

} // namespace detail

// Struve function H0.  Power series in extended precision below the switch
// point (the alternating series loses ~7 digits to cancellation near z=20,
// which long double absorbs), matched to Y0 plus the large-z correction
// series above it.  A calibration test pins the branch agreement at the
// switch point to ~1e-10.
inline constexpr double struve_h0_switch = 20.0;

inline double struve_h0(double z) {
    if (z < 0.0) throw std::domain_error("struve_h0: negative argument");
    if (z == 0.0) return 0.0;
    if (z <= struve_h0_switch) {
        // H0(z) = (2/pi) sum_k (-1)^k z^(2k+1) / [(2k+1)!!]^2
        const long double zz = static_cast<long double>(z) * z;
        long double term = static_cast<long double>(z);
        long double sum = term;
        for (int k = 1; k < 200; ++k) {
            const long double odd = 2.0L * k + 1.0L;
            term *= -zz / (odd * odd);
            sum += term;
            if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-30L) break;
        }
        return static_cast<double>(sum * 2.0L / std::numbers::pi_v<long double>);
    }
    // H0(z) - Y0(z) ~ (2/pi) sum_k (-1)^k [(2k-1)!!]^2 / z^(2k+1)
    const double z2 = z * z;
    double term = 1.0 / z;
    double sum = term;
    double last = std::abs(term);
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -odd * odd / z2;
        if (std::abs(term) > last) break;
        sum += term;
        last = std::abs(term);
    }
    return detail::bessel_y0_asymptotic(z) + sum * 2.0 / std::numbers::pi;
}

// sinc on the complex plane, sin(z)/z, with the removable singularity
// handled by its Taylor series.
inline std::complex<double> csinc(std::complex<double> z) {
    if (std::abs(z) < 1e-4) {
        const std::complex<double> z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendre q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

// Fixed-panel composite Gauss-Legendre for smooth 1-D integrands.
template <typename F>
double integrate_gl(F&& f, double a, double b, int n_points, int n_panels = 1) {
    const GaussLegendre q = gauss_legendre(n_points);
    double total = 0.0;
    const double h = (b - a) / n_panels;
    for (int p = 0; p < n_panels; ++p) {
        const double lo = a + p * h;
        double sum = 0.0;
        for (int i = 0; i < n_points; ++i)
            sum += q.weights[i] * f(lo + 0.5 * h * (q.nodes[i] + 1.0));
        total += 0.5 * h * sum;
    }
    return total;
}

} // namespace eig

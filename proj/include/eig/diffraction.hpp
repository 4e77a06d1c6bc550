#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "eig/biphoton.hpp"
#include "eig/errors.hpp"
#include "eig/params.hpp"

namespace eig {

// Diffracted intensity |A(tau; theta)|^2 over emission angle, normalized to
// unit peak.
struct AngularPattern {
    std::vector<double> theta_grid;
    std::vector<double> intensity;
};

// Grating-order angle: sin(theta_m) = m lambda_as / d.  nullopt marks an
// evanescent (non-propagating) order.
inline std::optional<double> order_angle(int m, const GratingGeometry& g) {
    const double s = static_cast<double>(m) * g.lambda_as / g.d;
    if (std::abs(s) > 1.0) return std::nullopt;
    return std::asin(s);
}

namespace detail {

// Per-node frequency integrals at one fixed delay; the slit phase is applied
// later per angle, so the expensive part is theta-independent.
struct SlitNodeAmplitudes {
    SlitQuadrature sq;
    std::vector<std::complex<double>> k_tau;  // one value per node
};

inline SlitNodeAmplitudes node_amplitudes(double tau_fixed, const AtomicParams& p,
                                          const GratingGeometry& g, const RegimeConfig& cfg) {
    cfg.window.validate();
    SlitNodeAmplitudes na;
    na.sq = (cfg.regime == Regime::resonance) ? SlitQuadrature::build_uniform(g, cfg.x_quad.n_points)
                                              : SlitQuadrature::build(g, cfg.x_quad.n_points);
    const KernelSpec ks = kernel_for(cfg);
    const double tau[1] = {tau_fixed};
    FourierQuadrature plan(-cfg.window.half_width, cfg.window.domega(), cfg.window.n_points(), tau);
    std::vector<std::complex<double>> f(cfg.window.n_points());
    na.k_tau.resize(na.sq.size());
    for (std::size_t idx = 0; idx < na.sq.size(); ++idx) {
        fill_kernel(f, cfg.window, na.sq.c2[idx], ks, p, g, cfg.swap_delay);
        check_edges(f, cfg.window.edge_tol, "angular_pattern");
        na.k_tau[idx] = plan.transform(f)[0];
    }
    return na;
}

} // namespace detail

// |array_factor(theta) * B(tau_fixed; theta)|^2 over the angle grid.
inline AngularPattern angular_pattern(double tau_fixed, std::span<const double> theta_grid,
                                      const AtomicParams& p, const GratingGeometry& g,
                                      const RegimeConfig& cfg) {
    if (tau_fixed < 0.0) throw config_error("angular_pattern: tau_fixed must be >= 0");
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        if (std::abs(theta_grid[i]) >= 0.5 * std::numbers::pi)
            throw config_error("angular_pattern: theta_grid must lie inside (-pi/2, pi/2)");
        if (i > 0 && theta_grid[i] <= theta_grid[i - 1])
            throw config_error("angular_pattern: theta_grid must be strictly increasing");
    }
    AngularPattern ap;
    ap.theta_grid.assign(theta_grid.begin(), theta_grid.end());
    ap.intensity.resize(theta_grid.size());

    if (!cfg.grating) {
        RegimeConfig c = cfg;
        for (std::size_t i = 0; i < theta_grid.size(); ++i) {
            const double tau[1] = {tau_fixed};
            auto b = detail::slit_trace(tau, theta_grid[i], p, g, c, detail::kernel_for(c),
                                        "angular_pattern");
            ap.intensity[i] = std::norm(array_factor(theta_grid[i], g) * b[0]);
        }
    } else {
        const auto na = detail::node_amplitudes(tau_fixed, p, g, cfg);
        for (std::size_t i = 0; i < theta_grid.size(); ++i) {
            const double st = std::sin(theta_grid[i]);
            std::complex<double> b{0.0, 0.0};
            for (std::size_t idx = 0; idx < na.sq.size(); ++idx)
                b += na.sq.weight[idx] * 2.0 * std::cos(g.k_as() * na.sq.x[idx] * st) *
                     na.k_tau[idx];
            ap.intensity[i] = std::norm(array_factor(theta_grid[i], g) * b);
        }
    }
    double peak = 0.0;
    for (double v : ap.intensity) peak = std::max(peak, v);
    if (peak > 0.0)
        for (double& v : ap.intensity) v /= peak;
    return ap;
}

// Trapezoid integral of the pattern over |theta - center| <= half_width.
inline double lobe_integral(const AngularPattern& ap, double center, double half_width) {
    double acc = 0.0;
    for (std::size_t i = 1; i < ap.theta_grid.size(); ++i) {
        const double a = ap.theta_grid[i - 1], b = ap.theta_grid[i];
        const double mid = 0.5 * (a + b);
        if (std::abs(mid - center) <= half_width)
            acc += 0.5 * (ap.intensity[i - 1] + ap.intensity[i]) * (b - a);
    }
    return acc;
}

// Share of the diffracted power inside the order-m lobe (a window of half
// the first-order angle around theta_m), relative to the whole grid range.
inline double order_share(const AngularPattern& ap, int m, const GratingGeometry& g) {
    const auto t1 = order_angle(1, g);
    const double half = t1 ? 0.5 * *t1 : 0.25 * std::numbers::pi;
    const auto tm = order_angle(m, g);
    if (!tm) return 0.0;
    const double total = lobe_integral(ap, 0.0, std::numbers::pi);
    return total > 0.0 ? lobe_integral(ap, *tm, half) / total : 0.0;
}

// Fraction of the total diffracted power in the zeroth-order lobe.
inline double zeroth_order_fraction(double tau_fixed, const AtomicParams& p,
                                    const GratingGeometry& g, const RegimeConfig& cfg,
                                    std::span<const double> theta_grid) {
    const AngularPattern ap = angular_pattern(tau_fixed, theta_grid, p, g, cfg);
    return order_share(ap, 0, g);
}

inline std::vector<double> default_theta_grid(int n = 4001,
                                              double theta_max = std::numbers::pi / 3.0) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = -theta_max + 2.0 * theta_max * static_cast<double>(i) / (n - 1);
    return t;
}

} // namespace eig

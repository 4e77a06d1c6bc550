#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "eig/errors.hpp"
#include "eig/params.hpp"
#include "eig/specfun.hpp"

namespace eig {

// Targets for convergence checking of the slit/frequency quadratures.
struct QuadratureSpec {
    int n_points = 136;       // total slit quadrature nodes (split over fixed panels)
    double rel_tol = 1e-3;    // doubling the resolution must move results less than this

    void validate() const {
        if (n_points < 2) throw config_error("QuadratureSpec: n_points must be >= 2");
        if (!(rel_tol > 0.0)) throw config_error("QuadratureSpec: rel_tol must be > 0");
    }
};

// Quadrature over one grating period in the substituted coordinate
// s = sin(pi x / d):
//   int_{-d/2}^{d/2} cos(pi x/d) e^{i q x} F(c2(x)) dx
//     = (d/pi) int_0^1 2 cos(q x(s)) F(1 - s^2) ds,
// with x(s) = (d/pi) asin(s), using that c2 is even in x.  The cosine slit
// weight is absorbed into the measure, only s > 0 nodes are stored (the
// mirror image enters through the 2 cos(q x) projection factor), and the
// nodes stay strictly inside the period (open rule), so the v_g -> 0
// endpoints are never touched.  Gauss-Legendre panels are graded toward
// s = 1 where the slow-light edge sweeps as tau grows.
struct SlitQuadrature {
    std::vector<double> x;       // node positions in um, all > 0
    std::vector<double> c2;      // cos^2(pi x / d) at the nodes
    std::vector<double> weight;  // (d/pi) ds measure; consumers apply 2 cos(q x)

    static constexpr std::array<double, 5> panel_edges{0.0, 0.6, 0.9, 0.975, 1.0};
    static constexpr std::array<double, 4> panel_share{4.0, 6.0, 4.0, 3.0};

    static SlitQuadrature build(const GratingGeometry& g, int n_points) {
        if (n_points < 8) throw config_error("SlitQuadrature: n_points must be >= 8");
        SlitQuadrature sq;
        double share_total = 0.0;
        for (double s : panel_share) share_total += s;
        for (std::size_t pnl = 0; pnl < panel_share.size(); ++pnl) {
            const int n =
                std::max(2, static_cast<int>(std::lround(n_points * panel_share[pnl] / share_total)));
            const double a = panel_edges[pnl], b = panel_edges[pnl + 1];
            const GaussLegendre q = gauss_legendre(n);
            for (int i = 0; i < n; ++i) {
                const double s = 0.5 * (b - a) * q.nodes[i] + 0.5 * (a + b);
                sq.x.push_back(g.d / std::numbers::pi * std::asin(s));
                sq.c2.push_back(1.0 - s * s);
                sq.weight.push_back(0.5 * (b - a) * q.weights[i] * (g.d / std::numbers::pi));
            }
        }
        return sq;
    }

    // Single-panel variant for kernels with no slow-light edge structure.
    static SlitQuadrature build_uniform(const GratingGeometry& g, int n_points) {
        if (n_points < 4) throw config_error("SlitQuadrature: n_points must be >= 4");
        SlitQuadrature sq;
        const GaussLegendre q = gauss_legendre(n_points);
        for (int i = 0; i < n_points; ++i) {
            const double s = 0.5 * q.nodes[i] + 0.5;  // (0,1)
            sq.x.push_back(g.d / std::numbers::pi * std::asin(s));
            sq.c2.push_back(1.0 - s * s);
            sq.weight.push_back(0.5 * q.weights[i] * (g.d / std::numbers::pi));
        }
        return sq;
    }

    std::size_t size() const { return x.size(); }
};

// Relative L2 distance between two equally-sized traces.
inline double rel_l2(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw config_error("rel_l2: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double rel_l2_complex(std::span<const std::complex<double>> a,
                             std::span<const std::complex<double>> b) {
    if (a.size() != b.size()) throw config_error("rel_l2_complex: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace eig

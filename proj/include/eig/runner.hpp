#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "eig/biphoton.hpp"
#include "eig/config.hpp"
#include "eig/diffraction.hpp"
#include "eig/io.hpp"
#include "eig/medium.hpp"
#include "eig/quadrature.hpp"

// Experiment orchestration: each run_* computes one plot-ready data set,
// writes it (CSV or JSON) plus a manifest, and returns the written paths.

namespace eig {

struct RunResult {
    std::vector<std::string> files;
    DataTable table;
    ResultManifest manifest;
};

namespace detail {

inline std::string data_path(const RunConfig& cfg, const std::string& stem) {
    if (!cfg.out_path.empty()) return cfg.out_path;
    return stem + (cfg.format == OutputFormat::csv ? ".csv" : ".json");
}

inline void finalize(RunResult& r, const RunConfig& cfg, const std::string& path) {
    const std::string bytes =
        cfg.format == OutputFormat::csv ? render_csv(r.table, cfg.echo()) : render_json(r.table);
    write_file(path, bytes);
    r.files.push_back(path);
    r.manifest.config_echo = cfg.echo();
    r.manifest.file_checksums[path] = fnv1a64_hex(bytes);
    r.manifest.add_grid(r.table.grid_name, r.table.grid);
    if (cfg.emit_plot_script) {
        const std::string gp = path + ".gp";
        write_file(gp, render_plot_script(path, r.table));
        r.files.push_back(gp);
    }
    const std::string mpath = path + ".manifest.json";
    write_file(mpath, r.manifest.render());
    r.files.push_back(mpath);
}

inline std::vector<double> normalized_rate(const std::vector<std::complex<double>>& b) {
    std::vector<double> r(b.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        r[i] = std::norm(b[i]);
        peak = std::max(peak, r[i]);
    }
    if (peak > 0.0)
        for (double& v : r) v /= peak;
    return r;
}

inline void require_converged(const std::vector<double>& coarse, const std::vector<double>& fine,
                              double rel_tol, const std::string& which) {
    const double err = rel_l2(fine, coarse);
    if (!(err <= rel_tol))
        throw numerical_error(which + " did not converge: doubling moved the result by " +
                              std::to_string(err) + " (rel_tol " + std::to_string(rel_tol) + ")");
}

} // namespace detail

// Transmission grating profile T(x) = exp(-2 alpha L) over two periods each
// side of the origin.  Absolute scale, not normalized.
inline RunResult run_transmission(const RunConfig& cfg) {
    RunResult r;
    const int n = 1601;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = -2.0 * cfg.grating_geom.d +
               4.0 * cfg.grating_geom.d * static_cast<double>(i) / (n - 1);
    const auto t = transmission_profile(x, cfg.atomic, cfg.grating_geom);
    std::vector<double> al(n);
    for (int i = 0; i < n; ++i) al[i] = absorption(x[i], cfg.atomic, cfg.grating_geom);
    r.table.grid_name = "x_um";
    r.table.grid = x;
    r.table.series.emplace_back("transmission", t);
    r.table.series.emplace_back("alpha_l", al);
    r.manifest.extra["node_transmission"] = std::exp(-cfg.atomic.optical_depth);
    detail::finalize(r, cfg, detail::data_path(cfg, "transmission"));
    return r;
}

// Two-photon coincidence trace.  Resonance regime exports the analytic
// closed form; the phase-matching/full regimes export the quadrature trace
// with its no-grating companion side by side.
inline RunResult run_coincidence(const RunConfig& cfg) {
    RunResult r;
    const auto tau = cfg.tau_grid_natural();
    std::vector<double> tau_ns(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) tau_ns[i] = cfg.units.natural_to_ns(tau[i]);
    r.table.grid_name = "tau_ns";
    r.table.grid = tau_ns;

    if (cfg.regime.regime == Regime::resonance) {
        const auto tr = coincidence_resonance(tau, cfg.atomic, cfg.grating_geom);
        r.table.series.emplace_back("rate_norm", tr.rate);
    } else {
        const bool chi3 = cfg.regime.has_chi3();
        auto rc = cfg.regime;
        rc.grating = true;
        const auto tr = coincidence_phasematch(tau, cfg.atomic, cfg.grating_geom, rc, chi3);
        auto rc_ng = rc;
        rc_ng.grating = false;
        const auto tr_ng = coincidence_phasematch(tau, cfg.atomic, cfg.grating_geom, rc_ng, chi3);
        if (cfg.regime.check_convergence) {
            auto rc2 = rc;
            rc2.x_quad.n_points *= 2;
            const auto tr2 = coincidence_phasematch(tau, cfg.atomic, cfg.grating_geom, rc2, chi3);
            detail::require_converged(tr.rate, tr2.rate, rc.x_quad.rel_tol,
                                      "coincidence slit quadrature");
        }
        r.table.series.emplace_back("rate_grating_norm", tr.rate);
        r.table.series.emplace_back("rate_no_grating_norm", tr_ng.rate);
    }
    detail::finalize(r, cfg, detail::data_path(cfg, "coincidence"));
    return r;
}

// Joint spectral intensity |Phi|^2 (normalized), grating and frozen-medium
// companion, on the export frequency grid.
inline RunResult run_spectrum(const RunConfig& cfg) {
    RunResult r;
    const auto wgrid = cfg.spectrum_grid();
    auto rc = cfg.regime;
    rc.grating = true;
    rc.x_quad.n_points = cfg.spectrum_x_points;

    const auto phi = joint_spectrum_on(cfg.atomic, cfg.grating_geom, rc, wgrid);
    auto rc_ng = rc;
    rc_ng.grating = false;
    const auto phi_ng = joint_spectrum_on(cfg.atomic, cfg.grating_geom, rc_ng, wgrid);
    auto abs2 = detail::normalized_rate(phi);
    auto abs2_ng = detail::normalized_rate(phi_ng);
    if (cfg.regime.check_convergence) {
        auto rc2 = rc;
        rc2.x_quad.n_points *= 2;
        const auto phi2 = joint_spectrum_on(cfg.atomic, cfg.grating_geom, rc2, wgrid);
        detail::require_converged(abs2, detail::normalized_rate(phi2), rc.x_quad.rel_tol,
                                  "spectrum slit quadrature");
    }
    r.table.grid_name = "omega_over_gamma31";
    r.table.grid = wgrid;
    r.table.series.emplace_back("phi_abs2_grating_norm", abs2);
    r.table.series.emplace_back("phi_abs2_no_grating_norm", abs2_ng);
    detail::finalize(r, cfg, detail::data_path(cfg, "spectrum"));
    return r;
}

// Angular diffraction pattern at a fixed delay, with the bare array-factor
// intensity alongside.
inline RunResult run_diffraction(const RunConfig& cfg) {
    RunResult r;
    const auto theta = cfg.theta_grid();
    const double tau_fixed = cfg.units.ns_to_natural(cfg.tau_fixed_ns);
    const auto ap = angular_pattern(tau_fixed, theta, cfg.atomic, cfg.grating_geom, cfg.regime);
    if (cfg.regime.check_convergence) {
        auto rc2 = cfg.regime;
        rc2.x_quad.n_points *= 2;
        const auto ap2 = angular_pattern(tau_fixed, theta, cfg.atomic, cfg.grating_geom, rc2);
        detail::require_converged(ap.intensity, ap2.intensity, cfg.regime.x_quad.rel_tol,
                                  "angular-pattern slit quadrature");
    }
    std::vector<double> af2(theta.size());
    const double af0 = std::norm(array_factor(0.0, cfg.grating_geom));
    for (std::size_t i = 0; i < theta.size(); ++i)
        af2[i] = std::norm(array_factor(theta[i], cfg.grating_geom)) / af0;
    r.table.grid_name = "theta_rad";
    r.table.grid = ap.theta_grid;
    r.table.series.emplace_back("intensity_norm", ap.intensity);
    r.table.series.emplace_back("array_factor_sq_norm", af2);
    r.manifest.extra["zeroth_order_fraction"] = order_share(ap, 0, cfg.grating_geom);
    for (int m = 1; m <= 2; ++m)
        if (const auto t = order_angle(m, cfg.grating_geom))
            r.manifest.extra["order_angle_" + std::to_string(m)] = *t;
    detail::finalize(r, cfg, detail::data_path(cfg, "diffraction"));
    return r;
}

// Propagating diffraction orders: m, sin(theta_m), theta_m.
inline RunResult run_orders(const RunConfig& cfg) {
    RunResult r;
    std::vector<double> ms, st, th;
    const int m_max = static_cast<int>(std::floor(cfg.grating_geom.d / cfg.grating_geom.lambda_as));
    for (int m = -m_max; m <= m_max; ++m) {
        if (const auto t = order_angle(m, cfg.grating_geom)) {
            ms.push_back(m);
            st.push_back(static_cast<double>(m) * cfg.grating_geom.lambda_as / cfg.grating_geom.d);
            th.push_back(*t);
        }
    }
    r.table.grid_name = "m";
    r.table.grid = ms;
    r.table.series.emplace_back("sin_theta", st);
    r.table.series.emplace_back("theta_rad", th);
    r.manifest.extra["first_evanescent_order"] = m_max + 1;
    detail::finalize(r, cfg, detail::data_path(cfg, "orders"));
    return r;
}

} // namespace eig

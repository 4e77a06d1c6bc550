#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "eig/errors.hpp"
#include "eig/medium.hpp"
#include "eig/oscillatory.hpp"
#include "eig/params.hpp"
#include "eig/quadrature.hpp"
#include "eig/specfun.hpp"

namespace eig {

enum class Regime { resonance, phase_matching, full };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::resonance: return "resonance";
        case Regime::phase_matching: return "phase_matching";
        case Regime::full: return "full";
    }
    return "?";
}

// Everything the trace/spectrum builders need beyond the physics parameters.
// window and swap_delay are resolved (by config loading or by hand) before
// use; swap_delay is the slow-light delay beyond which a slit node's
// phase-matching kernel is replaced by its onset-only form (see below).
struct RegimeConfig {
    Regime regime = Regime::full;
    bool include_chi3 = true;  // phase_matching regime: keep the chi3 factor of the kernel
    bool grating = true;       // false: freeze cos==1, v_g==v0, alpha==alpha(0)
    QuadratureSpec x_quad{};
    FrequencyWindow window{};
    double swap_delay = 0.0;       // 1/gamma31; 0 = disabled
    double spectrum_gate = 200.0;  // 1/gamma31; time-gating horizon of the spectrum transform
    bool check_convergence = false;

    bool has_pm() const { return regime != Regime::resonance; }
    bool has_chi3() const {
        return regime == Regime::resonance || regime == Regime::full ||
               (regime == Regime::phase_matching && include_chi3);
    }
};

// Two-photon coincidence rate over relative delay.  tau_grid is kept in
// natural units (1/gamma31) inside the library; exporters convert to ns.
struct CoincidenceTrace {
    std::vector<double> tau_grid;
    std::vector<double> rate;
    bool normalized = false;

    void normalize() {
        double peak = 0.0;
        for (double r : rate) peak = std::max(peak, r);
        if (peak > 0.0)
            for (double& r : rate) r /= peak;
        normalized = true;
    }
};

namespace detail {

struct KernelSpec {
    bool chi3 = true;
    bool pm = true;
    bool exact_rabi = true;  // false: the cosine approximation Omega_e^2 = |Omega_c|^2 cos^2
};

// Fills one slit node's kernel over the window grid.
//
// The phase-matching factor is sinc(dkL/2) e^{i dkL/2} = (e^{i dkL} - 1)/(i dkL)
// with dkL = omega L/v_g + i alpha L; the phase e^{i omega L/v_g} is advanced
// by recurrence across the uniform grid.  Nodes whose transit delay L/v_g
// exceeds swap_delay keep only the onset term -1/(i dkL): their turn-off
// edge lies beyond every requested delay, so dropping it is exact there,
// and it removes both the unresolvably fast omega-oscillation and the
// alias-wrapping tail.  The onset pole is deepened to alpha_eff so that the
// replaced node's time image dies out within the alias period.
inline void fill_kernel(std::span<std::complex<double>> out, const FrequencyWindow& win,
                        double c2, const KernelSpec& ks, const AtomicParams& p,
                        const GratingGeometry& g, double swap_delay,
                        const MediumResponse& m = {}) {
    const std::size_t n = win.n_points();
    const double ge = p.gamma_e();
    const double gg = p.gamma31 * p.gamma21;
    const double oe2 = p.omega_c * p.omega_c * c2 + (ks.exact_rabi ? gg : 0.0);
    const std::complex<double> i{0.0, 1.0};

    if (!ks.pm) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::complex<double> u = win.omega(k) + i * ge;
            out[k] = m.chi3_scale / (u * u - oe2);
        }
        return;
    }

    const double t_transit = g.transit_time(p) / c2;  // L/v_g
    const double a_l = absorption_c2(c2, p);
    const bool swap = swap_delay > 0.0 && t_transit > swap_delay;

    if (swap) {
        const double a_eff = std::max(a_l, (8.0 / swap_delay) * t_transit);
        for (std::size_t k = 0; k < n; ++k) {
            const std::complex<double> z = win.omega(k) * t_transit + i * a_eff;
            out[k] = -1.0 / (i * z);
        }
    } else {
        // e^{i omega_k L/v_g} by phasor recurrence; drift ~ n*eps is far below
        // the quadrature tolerances.
        const double dphi = win.domega() * t_transit;
        const std::complex<double> rot{std::cos(dphi), std::sin(dphi)};
        const double phi0 = -win.half_width * t_transit;
        std::complex<double> osc{std::cos(phi0), std::sin(phi0)};
        const double damp = std::exp(-a_l);
        for (std::size_t k = 0; k < n; ++k) {
            const std::complex<double> z = win.omega(k) * t_transit + i * a_l;
            if (std::abs(z) < 1e-8) {
                out[k] = 1.0 + 0.5 * i * z - z * z / 6.0;
            } else {
                out[k] = (damp * osc - 1.0) / (i * z);
            }
            osc *= rot;
        }
    }

    if (ks.chi3) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::complex<double> u = win.omega(k) + i * ge;
            out[k] *= m.chi3_scale / (u * u - oe2);
        }
    }
}

inline void check_edges(std::span<const std::complex<double>> f, double edge_tol,
                        const std::string& what) {
    const double r = edge_ratio(f);
    if (r > edge_tol)
        throw numerical_error(what + ": frequency window too narrow (edge/peak = " +
                              std::to_string(r) + "); enlarge half_width");
}

// Shared trace engine: per-node windowed Fourier transform, then the slit
// quadrature with per-node phase e^{i k_as x sin(theta)}.  Node work is
// spread over threads; each thread accumulates its own fixed node range in
// order and partial sums are combined in thread order, so results do not
// depend on scheduling.
inline std::vector<std::complex<double>> slit_trace(std::span<const double> tau, double theta,
                                                    const AtomicParams& p, const GratingGeometry& g,
                                                    const RegimeConfig& cfg, const KernelSpec& ks,
                                                    const std::string& what) {
    cfg.window.validate();
    cfg.x_quad.validate();
    double tau_max = 0.0;
    for (double t : tau) tau_max = std::max(tau_max, std::abs(t));
    if (ks.pm && cfg.swap_delay > 0.0 && tau_max > cfg.swap_delay)
        throw numerical_error(what + ": requested delay range exceeds the resolvable horizon (" +
                              std::to_string(cfg.swap_delay) + " / gamma31); increase n_samples");

    FourierQuadrature plan(-cfg.window.half_width, cfg.window.domega(), cfg.window.n_points(), tau);

    if (!cfg.grating) {
        // Frozen medium: the slit integral is analytic,
        // int e^{i q x} dx = d sinc(q d / 2) over one period.
        std::vector<std::complex<double>> f(cfg.window.n_points());
        fill_kernel(f, cfg.window, 1.0, ks, p, g, cfg.swap_delay);
        check_edges(f, cfg.window.edge_tol, what);
        auto out = plan.transform(f);
        const double q = g.k_as() * std::sin(theta);
        const std::complex<double> slit = g.d * csinc(std::complex<double>(0.5 * q * g.d, 0.0));
        for (auto& v : out) v *= slit;
        return out;
    }

    const SlitQuadrature sq = (cfg.regime == Regime::resonance)
                                  ? SlitQuadrature::build_uniform(g, cfg.x_quad.n_points)
                                  : SlitQuadrature::build(g, cfg.x_quad.n_points);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min<std::size_t>(hw, sq.size());
    std::vector<std::vector<std::complex<double>>> partial(n_threads);
    std::vector<std::string> errors(n_threads);

    auto worker = [&](std::size_t tid) {
        std::vector<std::complex<double>> f(cfg.window.n_points());
        std::vector<std::complex<double>> acc(tau.size(), std::complex<double>{0.0, 0.0});
        try {
            for (std::size_t idx = tid; idx < sq.size(); idx += n_threads) {
                fill_kernel(f, cfg.window, sq.c2[idx], ks, p, g, cfg.swap_delay);
                check_edges(f, cfg.window.edge_tol, what);
                const auto k_tau = plan.transform(f);
                // node + mirror image: 2 cos(q x) projection of e^{i q x}
                const double w =
                    sq.weight[idx] * 2.0 * std::cos(g.k_as() * sq.x[idx] * std::sin(theta));
                for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += w * k_tau[j];
            }
        } catch (const std::exception& e) {
            errors[tid] = e.what();
        }
        partial[tid] = std::move(acc);
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    }
    for (const auto& e : errors)
        if (!e.empty()) throw numerical_error(e);

    std::vector<std::complex<double>> out(tau.size(), std::complex<double>{0.0, 0.0});
    for (const auto& acc : partial)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += acc[j];
    return out;
}

inline KernelSpec kernel_for(const RegimeConfig& cfg) {
    KernelSpec ks;
    ks.chi3 = cfg.has_chi3();
    ks.pm = cfg.has_pm();
    ks.exact_rabi = true;
    return ks;
}

// Scalar kernel at one (omega, c2); no swap logic, exact form.
inline std::complex<double> kernel_at(double omega, double c2, const KernelSpec& ks,
                                      const AtomicParams& p, const GratingGeometry& g,
                                      const MediumResponse& m = {}) {
    const std::complex<double> i{0.0, 1.0};
    std::complex<double> v{1.0, 0.0};
    if (ks.pm) {
        const double t_transit = g.transit_time(p) / c2;
        const std::complex<double> z = omega * t_transit + i * absorption_c2(c2, p);
        v = csinc(0.5 * z) * std::exp(0.5 * i * z);
    }
    if (ks.chi3) {
        const double gg = p.gamma31 * p.gamma21;
        const double oe2 = p.omega_c * p.omega_c * c2 + (ks.exact_rabi ? gg : 0.0);
        const std::complex<double> u = omega + i * p.gamma_e();
        v *= m.chi3_scale / (u * u - oe2);
    }
    return v;
}

} // namespace detail

// Multi-slit interference factor, the direct (M+1)-term sum
// sum_{n=-M/2}^{M/2} e^{i k_as n d sin(theta)}.  Real by symmetry.
inline std::complex<double> array_factor(double theta, const GratingGeometry& g) {
    const double phi = g.k_as() * g.d * std::sin(theta);
    double s = 1.0;
    for (int n = 1; n <= g.m_slits / 2; ++n) s += 2.0 * std::cos(n * phi);
    return {s, 0.0};
}

// The closed form printed alongside the slit sum, sin(M u)/sin(u) with
// u = k_as d sin(theta)/2.  Kept as a comparison function only: it does not
// equal the (M+1)-term sum above (that would be sin((M+1)u)/sin(u)), and the
// direct sum is treated as ground truth.
inline double array_factor_closed(double theta, const GratingGeometry& g) {
    const double u = 0.5 * g.k_as() * g.d * std::sin(theta);
    if (std::abs(std::sin(u)) < 1e-12) return static_cast<double>(g.m_slits) * std::cos(g.m_slits * u) / std::cos(u);
    return std::sin(g.m_slits * u) / std::sin(u);
}

// Single-slit two-photon amplitude B(tau; theta): per-slit frequency integral
// of the regime kernel, then the cosine-weighted slit integral with the
// diffraction phase.
inline std::vector<std::complex<double>> single_slit_amplitude(std::span<const double> tau_grid,
                                                               double theta, const AtomicParams& p,
                                                               const GratingGeometry& g,
                                                               const RegimeConfig& cfg) {
    return detail::slit_trace(tau_grid, theta, p, g, cfg, detail::kernel_for(cfg),
                              "single_slit_amplitude");
}

// Full diffracted amplitude A(tau; theta) = array_factor x single-slit.
inline std::vector<std::complex<double>> two_photon_amplitude(std::span<const double> tau_grid,
                                                              double theta, const AtomicParams& p,
                                                              const GratingGeometry& g,
                                                              const RegimeConfig& cfg) {
    auto b = single_slit_amplitude(tau_grid, theta, p, g, cfg);
    const std::complex<double> af = array_factor(theta, g);
    for (auto& v : b) v *= af;
    return b;
}

// Resonance-dominated coincidence trace, analytic path:
// B(tau) = d H0(|Omega_c| tau) e^{-gamma_e tau}, rate = |B|^2 normalized.
// Uses the cosine approximation the closed form was derived with.
inline CoincidenceTrace coincidence_resonance(std::span<const double> tau_grid,
                                              const AtomicParams& p, const GratingGeometry& g) {
    CoincidenceTrace tr;
    tr.tau_grid.assign(tau_grid.begin(), tau_grid.end());
    tr.rate.resize(tau_grid.size());
    for (std::size_t j = 0; j < tau_grid.size(); ++j) {
        const double t = tau_grid[j];
        if (t <= 0.0) {
            tr.rate[j] = 0.0;
            continue;
        }
        const double b = g.d * struve_h0(p.omega_c * t) * std::exp(-p.gamma_e() * t);
        tr.rate[j] = b * b;
    }
    tr.normalize();
    return tr;
}

// Resonance-dominated trace by the generic double quadrature (frequency
// transform of chi3 at every slit node, then the slit integral).  With
// exact_rabi=false the effective Rabi frequency uses the cosine
// approximation, which reduces this path to the analytic one up to
// quadrature error -- that variant exists for machinery cross-checks.
inline CoincidenceTrace coincidence_resonance_numeric(std::span<const double> tau_grid,
                                                      const AtomicParams& p,
                                                      const GratingGeometry& g, RegimeConfig cfg,
                                                      bool exact_rabi = true) {
    cfg.regime = Regime::resonance;
    detail::KernelSpec ks = detail::kernel_for(cfg);
    ks.exact_rabi = exact_rabi;
    auto b = detail::slit_trace(tau_grid, 0.0, p, g, cfg, ks, "coincidence_resonance_numeric");
    CoincidenceTrace tr;
    tr.tau_grid.assign(tau_grid.begin(), tau_grid.end());
    tr.rate.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) tr.rate[j] = std::norm(b[j]);
    tr.normalize();
    return tr;
}

// Phase-matching-dominated coincidence trace; include_chi3 multiplies the
// chi3 resonances back into the kernel (the full-waveform variant).
inline CoincidenceTrace coincidence_phasematch(std::span<const double> tau_grid,
                                               const AtomicParams& p, const GratingGeometry& g,
                                               RegimeConfig cfg, bool include_chi3) {
    cfg.regime = Regime::phase_matching;
    cfg.include_chi3 = include_chi3;
    auto b = detail::slit_trace(tau_grid, 0.0, p, g, cfg, detail::kernel_for(cfg),
                                "coincidence_phasematch");
    CoincidenceTrace tr;
    tr.tau_grid.assign(tau_grid.begin(), tau_grid.end());
    tr.rate.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) tr.rate[j] = std::norm(b[j]);
    tr.normalize();
    return tr;
}

// Joint spectral function on the window grid.  Computed as the time-gated
// inverse transform of the slit-integrated amplitude: B(tau) is built on a
// Nyquist-spaced grid over [0, spectrum_gate] and transformed back.  The
// gate acts as the spectral resolution (features narrower than
// pi/spectrum_gate are smoothed); it is what makes the export stable against
// quadrature refinement, since structure from ever-slower slit regions is
// cut at a fixed horizon instead of at the node density.
inline std::vector<std::complex<double>> joint_spectrum_on(const AtomicParams& p,
                                                           const GratingGeometry& g,
                                                           const RegimeConfig& cfg,
                                                           std::span<const double> omega_out) {
    cfg.window.validate();
    if (!cfg.grating) {
        // Frozen medium: no slit integral, the kernel itself times d.
        std::vector<std::complex<double>> out(omega_out.size());
        const detail::KernelSpec ks = detail::kernel_for(cfg);
        for (std::size_t k = 0; k < omega_out.size(); ++k)
            out[k] = g.d * detail::kernel_at(omega_out[k], 1.0, ks, p, g);
        return out;
    }
    const double gate = cfg.spectrum_gate;
    if (!(gate > 0.0)) throw config_error("joint_spectrum: spectrum_gate must be > 0");
    if (cfg.swap_delay > 0.0 && gate > cfg.swap_delay)
        throw numerical_error("joint_spectrum: spectrum_gate exceeds the resolvable horizon; increase n_samples");
    const double dtau = std::numbers::pi / cfg.window.half_width;
    const std::size_t n_tau = static_cast<std::size_t>(std::ceil(gate / dtau)) + 1;
    std::vector<double> tau(n_tau);
    for (std::size_t j = 0; j < n_tau; ++j) tau[j] = static_cast<double>(j) * dtau;

    auto b = detail::slit_trace(tau, 0.0, p, g, cfg, detail::kernel_for(cfg), "joint_spectrum");

    FourierQuadrature inv(0.0, dtau, n_tau, omega_out, -1.0);
    auto out = inv.transform(b);
    const double scale = 1.0 / (2.0 * std::numbers::pi);
    for (auto& v : out) v *= scale;
    return out;
}

inline ComplexSpectrum joint_spectrum(const AtomicParams& p, const GratingGeometry& g,
                                      const RegimeConfig& cfg) {
    ComplexSpectrum out;
    out.omega_grid = cfg.window.grid();
    out.values = joint_spectrum_on(p, g, cfg, out.omega_grid);
    return out;
}

} // namespace eig

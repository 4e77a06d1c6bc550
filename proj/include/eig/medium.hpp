#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "eig/params.hpp"

// Linear and nonlinear optical response of the double-Lambda medium under a
// control standing wave.  Everything is a pure function of (omega, x) and the
// parameter records; x enters only through cos^2(pi x / d).

namespace eig {

inline double cos2_profile(double x, const GratingGeometry& g) {
    double c = std::cos(std::numbers::pi * x / g.d);
    return c * c;
}

// Effective control Rabi frequency, exact square-root form:
// Omega_e(x) = sqrt(|Omega_c|^2 cos^2(pi x/d) + gamma31*gamma21).
// Never below sqrt(gamma31*gamma21), even at the nodes.
inline double effective_rabi_c2(double c2, const AtomicParams& p) {
    return std::sqrt(p.omega_c * p.omega_c * c2 + p.gamma31 * p.gamma21);
}
inline double effective_rabi(double x, const AtomicParams& p, const GratingGeometry& g) {
    return effective_rabi_c2(cos2_profile(x, g), p);
}

// Third-order susceptibility of the anti-Stokes channel: two poles at
// omega = +-Omega_e - i*gamma_e, each resonance of linewidth 2*gamma_e.
inline std::complex<double> chi3_as_c2(double omega, double c2, const AtomicParams& p,
                                       const MediumResponse& m = {}) {
    const double oe = effective_rabi_c2(c2, p);
    const double ge = p.gamma_e();
    const std::complex<double> i{0.0, 1.0};
    return m.chi3_scale / ((omega - oe + i * ge) * (omega + oe + i * ge));
}
inline std::complex<double> chi3_as(double omega, double x, const AtomicParams& p,
                                    const GratingGeometry& g, const MediumResponse& m = {}) {
    return chi3_as_c2(omega, cos2_profile(x, g), p, m);
}

// Linear susceptibility of the anti-Stokes channel, as printed:
// (omega + i*gamma21) / [ |Omega_c|^2 cos^2 - (omega + i*gamma31)(omega + i*gamma21) ].
inline std::complex<double> chi_linear_as(double omega, double x, const AtomicParams& p,
                                          const GratingGeometry& g) {
    const double c2 = cos2_profile(x, g);
    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> den =
        p.omega_c * p.omega_c * c2 - (omega + i * p.gamma31) * (omega + i * p.gamma21);
    return (omega + i * p.gamma21) / den;
}

// Linear susceptibility of the Stokes channel.  Carries the weak-probe
// suppression |Omega_p|^2/(Delta_p^2+gamma41^2) and the relative 1/4 of its
// printed prefactor lineage (chi_s has /4·hbar·eps0 where chi_as has /hbar·eps0;
// the absolute scale of both is normalized away, the ratio is kept).
inline std::complex<double> chi_linear_s(double omega, double x, const AtomicParams& p,
                                         const GratingGeometry& g) {
    const double c2 = cos2_profile(x, g);
    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> den =
        p.omega_c * p.omega_c * c2 - (omega - i * p.gamma31) * (omega - i * p.gamma21);
    const double drive = p.omega_p * p.omega_p / (p.delta_p * p.delta_p + p.gamma41 * p.gamma41);
    return 0.25 * (omega - i * p.gamma31) / den * drive;
}

// Slow-light group velocity v_g(x) = v0 cos^2(pi x / d); exactly 0 at nodes.
inline double group_velocity(double x, const AtomicParams& p, const GratingGeometry& g) {
    return p.v0 * cos2_profile(x, g);
}

// alpha(x)*L, the dimensionless field-attenuation exponent:
// OD * gamma21*gamma31 / (2 [ |Omega_c|^2 cos^2 + gamma21*gamma31 ]).
// Maximal OD/2 at the nodes, minimal at the antinodes.
inline double absorption_c2(double c2, const AtomicParams& p) {
    const double gg = p.gamma21 * p.gamma31;
    return p.optical_depth * gg / (2.0 * (p.omega_c * p.omega_c * c2 + gg));
}
inline double absorption(double x, const AtomicParams& p, const GratingGeometry& g) {
    return absorption_c2(cos2_profile(x, g), p);
}

// Intensity transmission T(x) = exp(-2 alpha L).  alpha is the field
// (amplitude) coefficient -- it enters Delta_k -- so the node floor is the
// Beer value exp(-OD).
inline std::vector<double> transmission_profile(std::span<const double> x_grid,
                                                const AtomicParams& p, const GratingGeometry& g) {
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (x_grid[i] < x_grid[i - 1]) throw config_error("transmission_profile: x_grid not sorted");
    std::vector<double> t(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i)
        t[i] = std::exp(-2.0 * absorption(x_grid[i], p, g));
    return t;
}

} // namespace eig

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "eig/errors.hpp"

namespace eig {

// Atomic and drive parameters of the double-Lambda medium.  All rates and
// detunings are in units of gamma31; v0 (the antinode group velocity) is in
// um per 1/gamma31, so length/v0 is a time in natural units.  v0 is an
// input, not derived from density and dipole moments: every observable here
// depends on it only through L/v0 and the optical depth.
struct AtomicParams {
    double gamma31 = 1.0;      // |3>-|1> coherence decay rate (unit by convention)
    double gamma21 = 0.6;      // ground-state dephasing rate
    double gamma41 = 1.0;      // |4>-|1> decay rate
    double omega_c = 5.0;      // control Rabi frequency, peak value at an antinode
    double omega_p = 0.2;      // probe Rabi frequency
    double delta_p = 20.0;     // probe detuning from |1>-|4>
    double optical_depth = 5.0;
    double v0 = 198.94367886486917;  // L/v0 = 800 ns at gamma31 = 2pi x 3 MHz, L = 3 mm

    double gamma_e() const { return 0.5 * (gamma31 + gamma21); }

    void validate() const {
        if (!(gamma31 > 0.0)) throw config_error("gamma31 must be > 0");
        if (!(gamma21 > 0.0)) throw config_error("gamma21 must be > 0");
        if (!(gamma41 > 0.0)) throw config_error("gamma41 must be > 0");
        if (!(omega_c >= 0.0)) throw config_error("omega_c must be >= 0");
        if (!(omega_p >= 0.0)) throw config_error("omega_p must be >= 0");
        if (!(optical_depth >= 0.0)) throw config_error("optical_depth must be >= 0");
        if (!(v0 > 0.0)) throw config_error("v0 must be > 0");
        // The weak-probe limit is what justifies dropping the Stokes linear
        // response; make its violation a hard error rather than a silent bias.
        if (!(std::abs(omega_p) < 0.1 * std::abs(delta_p)))
            throw config_error("omega_p violates the weak-probe condition |omega_p| < 0.1*|delta_p|");
    }
};

// Standing-wave grating geometry.  Lengths in um.
struct GratingGeometry {
    double d = 2.0;            // standing-wave spatial period
    int m_slits = 20;          // number of illuminated periods M (even)
    double length = 3000.0;    // effective interaction length L
    double lambda_as = 0.795;  // central anti-Stokes wavelength

    double k_as() const { return 2.0 * std::numbers::pi / lambda_as; }
    double transit_time(const AtomicParams& p) const { return length / p.v0; }  // L/v0, 1/gamma31

    void validate() const {
        if (!(d > 0.0)) throw config_error("d must be > 0");
        if (!(length > 0.0)) throw config_error("length must be > 0");
        if (!(lambda_as > 0.0)) throw config_error("lambda_as must be > 0");
        if (m_slits < 2 || m_slits % 2 != 0)
            throw config_error("m_slits must be even and >= 2 (slit sum runs n = -M/2..M/2)");
    }
};

// Grouped prefactor of the third-order susceptibility.  Dipole moments and
// vacuum constants are absorbed here; traces are normalized on export, so
// only the default magnitude 1 is ever observable.
struct MediumResponse {
    std::complex<double> chi3_scale{1.0, 0.0};
};

} // namespace eig

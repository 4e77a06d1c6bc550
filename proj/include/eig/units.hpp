#pragma once

#include <numbers>

namespace eig {

// Internal unit system: angular frequencies and rates in units of gamma31,
// times in units of 1/gamma31, lengths in micrometers.  The only physical
// constant that enters I/O is gamma31 itself, given in the config as a
// linewidth gamma31/2pi in MHz.
struct Units {
    double gamma31_rad_per_ns;  // gamma31 expressed in rad/ns

    static Units from_mhz(double gamma31_mhz) {
        return {2.0 * std::numbers::pi * gamma31_mhz * 1e-3};
    }

    double ns_to_natural(double t_ns) const { return t_ns * gamma31_rad_per_ns; }
    double natural_to_ns(double t) const { return t / gamma31_rad_per_ns; }
};

} // namespace eig

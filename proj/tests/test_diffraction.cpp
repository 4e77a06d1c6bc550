#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "eig/config.hpp"
#include "eig/diffraction.hpp"

using namespace eig;
using std::numbers::pi;

namespace {

RunConfig light_cfg(int m_slits = 20) {
    RawConfig raw;
    raw.set("n_samples", "65536");
    raw.set("x_points", "96");
    raw.set("m_slits", std::to_string(m_slits));
    raw.set("convergence_check", "false");
    return resolve_config(raw);
}

} // namespace

TEST_CASE("order angles") {
    GratingGeometry g;  // d = 2, lambda = 0.795
    REQUIRE(order_angle(0, g));
    CHECK(*order_angle(0, g) == 0.0);
    REQUIRE(order_angle(1, g));
    CHECK(*order_angle(1, g) == Catch::Approx(std::asin(0.795 / 2.0)).margin(1e-15));
    REQUIRE(order_angle(-2, g));
    CHECK(*order_angle(-2, g) == Catch::Approx(-std::asin(2 * 0.795 / 2.0)).margin(1e-15));
    CHECK_FALSE(order_angle(3, g));  // 3*0.3975 > 1: evanescent
    CHECK_FALSE(order_angle(-3, g));
}

TEST_CASE("angular pattern: zeroth-order dominance and order positions") {
    const RunConfig cfg = light_cfg();
    const auto theta = default_theta_grid(4001);
    const double tau_fixed = cfg.units.ns_to_natural(cfg.tau_fixed_ns);
    const auto ap = angular_pattern(tau_fixed, theta, cfg.atomic, cfg.grating_geom, cfg.regime);
    const double step = theta[1] - theta[0];

    // normalized, global max at theta = 0
    std::size_t imax = 0;
    for (std::size_t i = 0; i < ap.intensity.size(); ++i) {
        CHECK(ap.intensity[i] >= 0.0);
        if (ap.intensity[i] > ap.intensity[imax]) imax = i;
    }
    CHECK(ap.intensity[imax] == 1.0);
    CHECK(std::abs(ap.theta_grid[imax]) <= step);

    // even in theta
    const std::size_t n = theta.size();
    for (std::size_t i = 0; i < n / 4; ++i)
        CHECK(ap.intensity[i] == Catch::Approx(ap.intensity[n - 1 - i]).margin(1e-10));

    // local maxima within one grid step of +-theta_1
    for (int m : {-1, 1}) {
        const double want = *order_angle(m, cfg.grating_geom);
        std::size_t i0 = static_cast<std::size_t>((want - theta[0]) / step);
        std::size_t best = i0;
        for (std::size_t i = i0 - 40; i < i0 + 40; ++i)
            if (ap.intensity[i] > ap.intensity[best]) best = i;
        CHECK(std::abs(ap.theta_grid[best] - want) <= step * (1.0 + 1e-12));
        CHECK(ap.intensity[best] > 1e-3);
    }

    // zeroth lobe carries more than any propagating higher order
    const double s0 = order_share(ap, 0, cfg.grating_geom);
    CHECK(s0 <= 1.0);
    for (int m : {1, 2, -1, -2}) CHECK(s0 > order_share(ap, m, cfg.grating_geom));

    // evanescent region: nothing at principal-maximum scale beyond the last
    // propagating order
    const double t2 = *order_angle(2, cfg.grating_geom);
    double beyond = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(theta[i]) > t2 + 0.06) beyond = std::max(beyond, ap.intensity[i]);
    CHECK(beyond < 0.5);
}

TEST_CASE("zeroth-order fraction grows with slit count") {
    const auto theta = default_theta_grid(4001);
    const RunConfig c2 = light_cfg(2);
    const RunConfig c20 = light_cfg(20);
    const double tau_fixed = c2.units.ns_to_natural(c2.tau_fixed_ns);
    const double f2 =
        zeroth_order_fraction(tau_fixed, c2.atomic, c2.grating_geom, c2.regime, theta);
    const double f20 =
        zeroth_order_fraction(tau_fixed, c20.atomic, c20.grating_geom, c20.regime, theta);
    CHECK(f2 <= 1.0);
    CHECK(f20 <= 1.0);
    CHECK(f20 > f2);
}

TEST_CASE("angular integral is stable under grid refinement") {
    const RunConfig cfg = light_cfg();
    const double tau_fixed = cfg.units.ns_to_natural(cfg.tau_fixed_ns);
    const auto coarse = default_theta_grid(4001);
    const auto fine = default_theta_grid(8001);
    const auto a = angular_pattern(tau_fixed, coarse, cfg.atomic, cfg.grating_geom, cfg.regime);
    const auto b = angular_pattern(tau_fixed, fine, cfg.atomic, cfg.grating_geom, cfg.regime);
    const double ia = lobe_integral(a, 0.0, pi);
    const double ib = lobe_integral(b, 0.0, pi);
    CHECK(std::abs(ia - ib) / ib < 1e-3);
}

TEST_CASE("angular pattern rejects negative delay") {
    const RunConfig cfg = light_cfg();
    const auto theta = default_theta_grid(101);
    CHECK_THROWS_AS(angular_pattern(-1.0, theta, cfg.atomic, cfg.grating_geom, cfg.regime),
                    config_error);
}

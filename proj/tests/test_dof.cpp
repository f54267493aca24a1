#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "surflink/dof.hpp"

using namespace surflink;
using doctest::Approx;

namespace {

const Medium cm_band = Medium::free_space(0.01);

LinkGeometry factory_link(double d, double sx, double sy) {
    return make_parallel_link(d, {0.05, 0.05}, {sx, sy}, {0, 0}, cm_band);
}

}  // namespace

TEST_CASE("shoelace area on simple polygons") {
    // unit square, counterclockwise
    CHECK(shoelace_area({{0, 0}, {1, 0}, {1, 1}, {0, 1}}) == 1.0);
    // orientation does not matter, the area is unsigned
    CHECK(shoelace_area({{0, 1}, {1, 1}, {1, 0}, {0, 0}}) == 1.0);
    // triangle
    CHECK(shoelace_area({{0, 0}, {2, 0}, {0, 3}}) == 3.0);
    // a figure-eight ordering cancels itself
    CHECK(shoelace_area({{0, 0}, {1, 1}, {1, 0}, {0, 1}}) == 0.0);
}

TEST_CASE("observed in-plane wavenumbers stay on the k sphere") {
    const Medium m = Medium::free_space(1.0);
    const Eigen::Vector3d r(0.3, -0.2, 0);
    const Eigen::Vector3d s(1.0, 2.0, 2.5);
    const WavenumberSample k = wavenumber(r, s, m);
    const Eigen::Vector3d diff = r - s;
    CHECK(k.kx == Approx(m.wavenumber * diff.x() / diff.norm()).epsilon(1e-14));
    CHECK(k.ky == Approx(m.wavenumber * diff.y() / diff.norm()).epsilon(1e-14));
    CHECK(k.kx * k.kx + k.ky * k.ky <= m.wavenumber * m.wavenumber);
    CHECK_THROWS_AS(wavenumber(r, r, m), std::invalid_argument);
}

TEST_CASE("local bandwidth shrinks with distance from the transmitter") {
    const LinkGeometry link = factory_link(5.0, 5.0, 5.0);
    const Eigen::Vector3d center(0, 0, 0);
    const Eigen::Vector3d edge(2.4, 0, 0);
    const double a0 = local_bandwidth_area(center, link.tx, cm_band);
    const double a1 = local_bandwidth_area(edge, link.tx, cm_band);
    CHECK(a0 > 0);
    CHECK(a1 < a0);  // oblique view of the same aperture spans less k-area
    CHECK(local_bandwidth(center, link.tx, cm_band) == Approx(a0 / 4.0).epsilon(1e-14));
}

TEST_CASE("closed-form DoF hits the factory-scenario value") {
    const LinkGeometry link = factory_link(5.0, 5.0, 5.0);
    CHECK(dof_closed_parallel(link) == Approx(18.806867).epsilon(1e-6));
    // the usual back-of-envelope answer for this scenario is 20
    CHECK(std::abs(dof_closed_parallel(link) / 20.0 - 1.0) < 0.10);
    CHECK(round_modes(dof_closed_parallel(link)) == 19);
}

TEST_CASE("closed form matches quadrature of the bandwidth map") {
    QuadratureSpec spec;
    for (double d : {0.5, 2.0, 8.0}) {
        const LinkGeometry link = factory_link(d, 5.0, 2.5);
        CHECK(dof_numeric(link, spec) ==
              Approx(dof_closed_parallel(link)).epsilon(0.005));
    }
}

TEST_CASE("DoF is symmetric under swapping the receiver sides") {
    const LinkGeometry wide = factory_link(3.0, 10.0, 2.5);
    const LinkGeometry tall = factory_link(3.0, 2.5, 10.0);
    CHECK(dof_closed_parallel(wide) == Approx(dof_closed_parallel(tall)).epsilon(1e-14));
}

TEST_CASE("DoF scales with transmit area, exactly") {
    const LinkGeometry base = factory_link(5.0, 5.0, 5.0);
    const LinkGeometry half =
        make_parallel_link(5.0, {0.025, 0.025}, {5.0, 5.0}, {0, 0}, cm_band);
    CHECK(dof_closed_parallel(half) / dof_closed_parallel(base) == Approx(0.25).epsilon(1e-14));
}

TEST_CASE("giant receiver saturates the half-space bandwidth limit") {
    const double d = 5.0;
    const LinkGeometry link = factory_link(d, 1e4 * d, 1e4 * d);
    const double cap = dof_asymptotic_parallel(0.0025, 0.01);
    CHECK(cap == Approx(std::numbers::pi * 0.0025 / 1e-4).epsilon(1e-14));
    CHECK(cap == Approx(78.539816).epsilon(1e-6));
    CHECK(dof_closed_parallel(link) == Approx(cap).epsilon(1e-3));
    CHECK(dof_closed_parallel(link) < cap);  // approaches from below
}

TEST_CASE("far links collapse onto the aperture product rule") {
    const double d = std::sqrt(1e3 * 25.0);
    const LinkGeometry link = factory_link(d, 5.0, 5.0);
    const double miller = dof_farfield_miller({0.05, 0.05}, {5.0, 5.0}, d, 0.01);
    CHECK(miller == Approx(0.05 * 5.0 / (d * 0.01) * 0.05 * 5.0 / (d * 0.01)).epsilon(1e-14));
    CHECK(dof_closed_parallel(link) == Approx(miller).epsilon(0.01));
}

TEST_CASE("perpendicular DoF reproduces both of its limits") {
    // far field: A_T A_R S_y / (4 lambda^2 d^3)
    const double d_far = std::sqrt(1e3 * 25.0);
    const LinkGeometry far = make_perpendicular_link(d_far, {0.05, 0.05}, {5, 5}, {0, 0}, cm_band);
    const double estimate = dof_farfield_perpendicular(0.0025, 25.0, 5.0, d_far, 0.01);
    CHECK(estimate ==
          Approx(0.0025 * 25.0 * 5.0 / (4.0 * 1e-4 * d_far * d_far * d_far)).epsilon(1e-14));
    CHECK(dof_closed_perpendicular(far) == Approx(estimate).epsilon(0.01));

    // huge receiver: same half-space cap as the parallel case
    const double d = 5.0;
    const LinkGeometry big =
        make_perpendicular_link(d, {0.05, 0.05}, {1e3 * d, 1e3 * d}, {0, 0}, cm_band);
    CHECK(dof_closed_perpendicular(big) ==
          Approx(dof_asymptotic_perpendicular(0.0025, 0.01)).epsilon(0.01));

    // and the perpendicular count always trails the parallel one
    const LinkGeometry perp = make_perpendicular_link(3.0, {0.05, 0.05}, {5, 5}, {0, 0}, cm_band);
    const LinkGeometry para = factory_link(3.0, 5.0, 5.0);
    CHECK(dof_closed_perpendicular(perp) < dof_closed_parallel(para));
}

TEST_CASE("numeric DoF drops when the transmitter slides off center") {
    QuadratureSpec spec;
    const LinkGeometry centered = factory_link(3.0, 5.0, 5.0);
    const LinkGeometry off =
        make_parallel_link(3.0, {0.05, 0.05}, {5.0, 5.0}, {1.5, 0}, cm_band);
    CHECK(dof_numeric(off, spec) < dof_numeric(centered, spec));
}

TEST_CASE("mode rounding never reports less than one mode") {
    CHECK(round_modes(0.2) == 1);
    CHECK(round_modes(1.4) == 1);
    CHECK(round_modes(1.6) == 2);
    CHECK(round_modes(18.806867) == 19);
    CHECK(round_modes(-3.0) == 1);
    CHECK(round_modes(std::nan("")) == 1);
}

TEST_CASE("dof report assembles a consistent row") {
    QuadratureSpec spec;
    const LinkGeometry link = factory_link(5.0, 5.0, 5.0);
    const DofReport r = dof_report(link, spec);
    CHECK(r.d_closed == Approx(dof_closed_parallel(link)).epsilon(1e-14));
    CHECK(r.d_numeric == Approx(r.d_closed).epsilon(0.005));
    CHECK(r.d_asymptotic == Approx(78.539816).epsilon(1e-6));
    CHECK(r.d_rounded == 19);

    const LinkGeometry off = make_parallel_link(5.0, {0.05, 0.05}, {5.0, 5.0}, {1.0, 0}, cm_band);
    const DofReport ro = dof_report(off, spec);
    CHECK(std::isnan(ro.d_closed));
    CHECK(ro.d_rounded == round_modes(ro.d_numeric));
}

TEST_CASE("closed forms reject the wrong geometry kind") {
    const LinkGeometry perp = make_perpendicular_link(3.0, {0.05, 0.05}, {5, 5}, {0, 0}, cm_band);
    const LinkGeometry para = factory_link(3.0, 5.0, 5.0);
    CHECK_THROWS_AS(dof_closed_parallel(perp), std::invalid_argument);
    CHECK_THROWS_AS(dof_closed_perpendicular(para), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "surflink/green.hpp"

using namespace surflink;
using doctest::Approx;
using namespace std::complex_literals;

namespace {
const Medium medium = Medium::free_space(1.0);
const double eta = free_space_impedance_ohm;
}  // namespace

TEST_CASE("far-field tensor matches its textbook form on axis") {
    // displacement along y: the x column is just the prefactor times x-hat
    const GreenTensor g = green_farfield(Eigen::Vector3d(0, 2.0, 0), medium);
    const std::complex<double> pref =
        -1i * eta / (2.0 * medium.wavelength * 2.0) * std::exp(-1i * medium.wavenumber * 2.0);
    CHECK(std::abs(g.value(0, 0) - pref) < 1e-12 * std::abs(pref));
    CHECK(std::abs(g.value(1, 1)) < 1e-14 * std::abs(pref));  // longitudinal column dies
    CHECK(std::abs(g.value(2, 2) - pref) < 1e-12 * std::abs(pref));

    // one wavelength out the phase factor is back to 1: value is -j eta / (2 lambda^2)
    const GreenTensor unit = green_farfield(Eigen::Vector3d(0, 1.0, 0), medium);
    CHECK(std::abs(unit.value(0, 0).real()) < 1e-12 * eta);
    CHECK(unit.value(0, 0).imag() == Approx(-eta / 2.0));
}

TEST_CASE("tensor is symmetric and even in the displacement") {
    const Eigen::Vector3d v(0.7, -1.3, 2.1);
    for (const GreenTensor& g : {green_full(v, medium), green_farfield(v, medium)}) {
        CHECK((g.value - g.value.transpose()).cwiseAbs().maxCoeff() < 1e-12 * eta);
    }
    const GreenTensor plus = green_full(v, medium);
    const GreenTensor minus = green_full(-v, medium);
    CHECK((plus.value - minus.value).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("x column equals the first column of the tensor") {
    const Eigen::Vector3d v(0.3, 0.9, -1.7);
    const Eigen::Vector3cd col = green_column_x(v, medium);
    const Eigen::Vector3cd ref = green_farfield(v, medium).value.col(0);
    CHECK((col - ref).cwiseAbs().maxCoeff() < 1e-13 * col.cwiseAbs().maxCoeff());
}

TEST_CASE("squared column norm carries the transverse geometric factor") {
    // |G_x|^2 = (eta / 2 lambda r)^2 (dy^2 + dz^2) / r^2, the link-gain integrand
    const Eigen::Vector3d v(1.1, -0.4, 2.6);
    const double r = v.norm();
    const double expected = std::pow(eta / (2.0 * medium.wavelength * r), 2) *
                            (v.y() * v.y() + v.z() * v.z()) / (r * r);
    CHECK(green_column_x(v, medium).squaredNorm() == Approx(expected).epsilon(1e-12));
}

TEST_CASE("near terms fade as the link stretches") {
    const Eigen::Vector3d dir = Eigen::Vector3d(1, 2, 2).normalized();
    auto rel_gap = [&](double r) {
        const Eigen::Matrix3cd full = green_full(r * dir, medium).value;
        const Eigen::Matrix3cd far = green_farfield(r * dir, medium).value;
        return (full - far).cwiseAbs().maxCoeff() / far.cwiseAbs().maxCoeff();
    };
    CHECK(rel_gap(30.0) < 0.01);
    CHECK(rel_gap(5.0) > 0.01);
    CHECK(rel_gap(300.0) < rel_gap(30.0));
}

TEST_CASE("full tensor decomposes into transverse and longitudinal parts") {
    const Eigen::Vector3d v(0.5, 1.5, -1.0);
    const double r = v.norm();
    const Eigen::Vector3d rhat = v / r;
    const std::complex<double> pref = -1i * eta /
                                      (2.0 * medium.wavelength * r) *
                                      std::exp(-1i * medium.wavenumber * r);
    const double s = medium.wavelength / (2.0 * std::numbers::pi * r);
    const Eigen::Matrix3d transverse =
        Eigen::Matrix3d::Identity() - rhat * rhat.transpose();
    const Eigen::Matrix3d longitudinal =
        Eigen::Matrix3d::Identity() - 3.0 * rhat * rhat.transpose();
    const Eigen::Matrix3cd expected =
        pref * (transverse + (1i * s - s * s) * longitudinal);
    const Eigen::Matrix3cd got = green_full(v, medium).value;
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12 * got.cwiseAbs().maxCoeff());
}

TEST_CASE("zero displacement is rejected") {
    CHECK_THROWS_AS(green_full(Eigen::Vector3d::Zero(), medium), std::invalid_argument);
    CHECK_THROWS_AS(green_column_x(Eigen::Vector3d::Zero(), medium), std::invalid_argument);
}

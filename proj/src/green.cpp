#include "surflink/green.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace surflink {

using namespace std::complex_literals;

namespace {

struct Eval {
    double r;
    Eigen::Vector3d rhat;
    std::complex<double> prefactor;  // -j eta e^{-j k0 r} / (2 lambda r)
};

Eval prepare(const Eigen::Vector3d& displacement, const Medium& medium) {
    const double r = displacement.norm();
    if (r <= 0) {
        throw std::invalid_argument("green: zero displacement");
    }
    Eval e;
    e.r = r;
    e.rhat = displacement / r;
    const std::complex<double> phase = std::polar(1.0, -medium.wavenumber * r);
    e.prefactor = -1i * medium.impedance / (2.0 * medium.wavelength * r) * phase;
    return e;
}

}  // namespace

GreenTensor green_full(const Eigen::Vector3d& displacement, const Medium& medium) {
    const Eval e = prepare(displacement, medium);
    const Eigen::Matrix3d rr = e.rhat * e.rhat.transpose();
    const Eigen::Matrix3d transverse = Eigen::Matrix3d::Identity() - rr;
    const Eigen::Matrix3d longitudinal = Eigen::Matrix3d::Identity() - 3.0 * rr;
    // near-field corrections share (I - 3 rr^T); s = lambda / (2 pi r)
    const double s = medium.wavelength / (2.0 * std::numbers::pi * e.r);
    GreenTensor g;
    g.displacement = displacement;
    g.value = e.prefactor * (transverse + (1i * s - s * s) * longitudinal);
    return g;
}

GreenTensor green_farfield(const Eigen::Vector3d& displacement, const Medium& medium) {
    const Eval e = prepare(displacement, medium);
    GreenTensor g;
    g.displacement = displacement;
    g.value = e.prefactor *
              (Eigen::Matrix3d::Identity() - e.rhat * e.rhat.transpose());
    return g;
}

Eigen::Vector3cd green_column_x(const Eigen::Vector3d& displacement, const Medium& medium) {
    const Eval e = prepare(displacement, medium);
    Eigen::Vector3d col = -e.rhat.x() * e.rhat;
    col.x() += 1.0;
    return e.prefactor * col;
}

}

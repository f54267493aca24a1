#pragma once

#include <complex>

#include <Eigen/Dense>

#include "surflink/geometry.hpp"

namespace surflink {

// Free-space tensor Green's function evaluated at a displacement r.
// Time convention e^{+j w t}; outgoing waves carry e^{-j k0 r}.
struct GreenTensor {
    Eigen::Matrix3cd value;        // [ohm/m^2]
    Eigen::Vector3d displacement;  // [m]
};

// All three radial orders: the transverse 1/r term plus the 1/r^2 and
// 1/r^3 corrections. Diagnostics only; integrals use the far-field form.
GreenTensor green_full(const Eigen::Vector3d& displacement, const Medium& medium);

// Leading 1/r term: -(j eta e^{-j k0 r} / 2 lambda r) (I - rr^T).
GreenTensor green_farfield(const Eigen::Vector3d& displacement, const Medium& medium);

// First column of the far-field tensor: the field of an x-polarized source.
Eigen::Vector3cd green_column_x(const Eigen::Vector3d& displacement, const Medium& medium);

}

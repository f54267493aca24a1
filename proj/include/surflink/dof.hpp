#pragma once

#include <utility>
#include <vector>

#include "surflink/geometry.hpp"
#include "surflink/quadrature.hpp"

namespace surflink {

// In-plane wavenumbers observed at a receive point r for a source point s.
struct WavenumberSample {
    double kx = 0;  // [rad/m]
    double ky = 0;
};

WavenumberSample wavenumber(const Eigen::Vector3d& r, const Eigen::Vector3d& s,
                            const Medium& medium);

// Shoelace area of a closed polygon traversed in vertex order.
double shoelace_area(const std::vector<WavenumberSample>& cycle);

// Area A(r) of the wavenumber-support quadrilateral spanned by the images of
// the four tx corners, traversed along the perimeter. B(r) = A(r)/4.
double local_bandwidth_area(const Eigen::Vector3d& r, const RectSurface& tx,
                            const Medium& medium);
double local_bandwidth(const Eigen::Vector3d& r, const RectSurface& tx, const Medium& medium);

// Degrees of freedom as the rx integral of the wavenumber-support area:
// D = (1/4 pi^2) * integral of A(r).
double dof_numeric(const LinkGeometry& link, const QuadratureSpec& spec);

// Closed form for centered parallel surfaces.
double dof_closed_parallel(const LinkGeometry& link);

// Closed form for a centered perpendicular tx (sides L_x, L_z).
double dof_closed_perpendicular(const LinkGeometry& link);

// Large-surface saturation pi A_T / lambda^2 (same for both orientations).
double dof_asymptotic_parallel(double tx_area, double wavelength);
double dof_asymptotic_perpendicular(double tx_area, double wavelength);

// Far-field parallel baseline: product of the four aperture sides / (d lambda)^2.
double dof_farfield_miller(std::pair<double, double> tx_aperture,
                           std::pair<double, double> rx_aperture, double d,
                           double wavelength);

// Far-field limit of the perpendicular closed form: A_T A_R S_y / (4 lambda^2 d^3).
double dof_farfield_perpendicular(double tx_area, double rx_area, double rx_len_y,
                                  double d, double wavelength);

// Continuous DoF -> usable mode count: nearest integer, at least 1.
int round_modes(double dof);

struct DofReport {
    double d_numeric = 0;
    double d_closed = 0;   // NaN when the geometry has no closed form
    double d_asymptotic = 0;
    double d_farfield = 0; // parallel far-field baseline
    int d_rounded = 1;
};

DofReport dof_report(const LinkGeometry& link, const QuadratureSpec& spec);

}

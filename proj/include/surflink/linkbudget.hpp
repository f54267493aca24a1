#pragma once

#include "surflink/geometry.hpp"
#include "surflink/quadrature.hpp"

namespace surflink {

// Normalized coupling intensity between the surfaces for an x-polarized
// source: (1/lambda^2) * integral over rx x tx of
// [(r_y - s_y)^2 + (r_z - s_z)^2] / |r - s|^4.
double coupling_intensity(const LinkGeometry& link, const QuadratureSpec& spec);

// Same quantity computed from the field kernel instead of the geometric
// integrand: (4/eta^2) * integral of |G_x(r - s)|^2. Cross-check path.
double coupling_intensity_field(const LinkGeometry& link, const QuadratureSpec& spec);

// Transmit aperture directivity 4 pi A_T / lambda^2.
double tx_directivity(double tx_area, double wavelength);

// Brute-force link power gain for a parallel link with a small tx aperture:
// g = (A_T/lambda^2) * integral over rx of ((r_y - y0)^2 + d^2) * d / |r - s0|^5.
double gain_numeric(const LinkGeometry& link, const QuadratureSpec& spec);

// Closed-form gain for a centered parallel link over a S_x x S_y rx surface.
double gain_closed(const LinkGeometry& link);

// Closed-form gain for a centered square rx surface as a function of
// F = d^2 / A_R only (times A_T/lambda^2).
double gain_closed_square(double F, double tx_area, double wavelength);

// Far-field baseline A_T A_R / (lambda^2 d^2).
double gain_friis(const LinkGeometry& link);
double gain_friis(double tx_area, double rx_area, double d, double wavelength);

// Infinite-rx saturation value 4 pi A_T / (3 lambda^2).
double gain_large_lis(double tx_area, double wavelength);

// Capacity ratio of D equal-power parallel channels to a single channel
// at the same total snr.
double capacity_gain(int modes, double snr);

// Orthogonal links per square meter of transmit aperture.
double spatial_density(int modes, double tx_area);

struct GainReport {
    double g_numeric = 0;
    double g_closed = 0;  // NaN when the geometry has no closed form
    double g_friis = 0;
    double g_large_lis = 0;
    double normalized_gain = 0;  // g / (4 pi A_T / lambda^2)
    bool tx_small_regime = true; // max tx side <= d/10
};

GainReport gain_report(const LinkGeometry& link, const QuadratureSpec& spec);

}

#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "surflink/errors.hpp"
#include "surflink/geometry.hpp"

namespace surflink {

// Adaptive panel quadrature: fixed-order Gauss-Legendre tensor rule per
// panel, per-axis error estimated against the half-order rule, worst axis
// bisected until the summed error estimate meets rel_tol.
struct QuadratureSpec {
    int nodes_per_axis = 32;     // surface integrals (2 axes)
    int nodes_per_axis_pair = 8; // surface-pair integrals (4 axes)
    double rel_tol = 1e-6;
    int max_subdivisions = 12;   // bisection depth cap per axis
    int initial_panels = 1;      // starting panels per axis
    bool parallel = true;        // evaluate panel batches across threads
};

struct QuadratureResult {
    double value = 0;
    double error = 0;  // estimated absolute error
};

struct ComplexQuadratureResult {
    std::complex<double> value{0, 0};
    double error = 0;
};

using SurfaceIntegrand = std::function<double(const Eigen::Vector3d&)>;
using SurfacePairIntegrand =
    std::function<double(const Eigen::Vector3d&, const Eigen::Vector3d&)>;
using ComplexSurfaceIntegrand = std::function<std::complex<double>(const Eigen::Vector3d&)>;
using ComplexSurfacePairIntegrand =
    std::function<std::complex<double>(const Eigen::Vector3d&, const Eigen::Vector3d&)>;

// Integral of f over one surface. Throws convergence_error when the panel
// budget runs out before the tolerance is met.
QuadratureResult integrate_surface(const SurfaceIntegrand& f, const RectSurface& surface,
                                   const QuadratureSpec& spec);
ComplexQuadratureResult integrate_surface_complex(const ComplexSurfaceIntegrand& f,
                                                  const RectSurface& surface,
                                                  const QuadratureSpec& spec);

// Integral of f(r, s) over the product of two surfaces (4 axes: r then s).
QuadratureResult integrate_double_surface(const SurfacePairIntegrand& f,
                                          const RectSurface& s1, const RectSurface& s2,
                                          const QuadratureSpec& spec);
ComplexQuadratureResult integrate_double_surface_complex(const ComplexSurfacePairIntegrand& f,
                                                         const RectSurface& s1,
                                                         const RectSurface& s2,
                                                         const QuadratureSpec& spec);

}

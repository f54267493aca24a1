#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "surflink/geometry.hpp"
#include "surflink/quadrature.hpp"

namespace surflink {

// x_to_x keeps the scalar x->x tensor entry per patch pair; x_to_vector
// stacks the full field column of an x-polarized source (3 rows per rx patch).
enum class KernelMode { x_to_x, x_to_vector };

enum class Side { tx, rx };

inline constexpr std::size_t default_entry_budget = 200'000'000;

// Discretized radiation operator between the patch grids. Entry block (i, j)
// holds G_x(r_i - s_j) * delta_T * delta_R, so singular values approximate
// the continuous coupling strengths.
struct KernelMatrix {
    Eigen::MatrixXcd matrix;  // (c * N_R) x N_T with c in {1, 3}
    SurfaceGrid tx_grid;
    SurfaceGrid rx_grid;
    KernelMode mode = KernelMode::x_to_vector;

    int components() const { return mode == KernelMode::x_to_vector ? 3 : 1; }
};

KernelMatrix assemble_kernel(const LinkGeometry& link, double delta, KernelMode mode,
                             bool parallel = true,
                             std::size_t entry_budget = default_entry_budget);

// Role-swapped operator for reciprocity checks: currents on the former rx
// surface (all Cartesian components in x_to_vector mode) observed through
// the x-polarized response on the former tx surface. Assembled from scratch
// at negated displacements; shares its nonzero singular values with the
// forward kernel.
KernelMatrix assemble_reciprocal_kernel(const LinkGeometry& link, double delta,
                                        KernelMode mode, bool parallel = true,
                                        std::size_t entry_budget = default_entry_budget);

// Singular value decomposition of the kernel with a pinned phase convention:
// the first significant component of each right vector is real-positive.
struct ModeSpectrum {
    Eigen::VectorXd singular_values;  // non-increasing
    Eigen::MatrixXcd left;            // (c * N_R) x K, orthonormal columns
    Eigen::MatrixXcd right;           // N_T x K, orthonormal columns
    SurfaceGrid tx_grid;
    SurfaceGrid rx_grid;
    KernelMode mode = KernelMode::x_to_vector;

    int modes() const { return static_cast<int>(singular_values.size()); }
};

ModeSpectrum solve_modes(const KernelMatrix& kernel);

// Number of modes whose squared coupling lies within threshold_db of the
// strongest one.
int count_dof(const ModeSpectrum& spectrum, double threshold_db = 3.0);

// Relative gap between the spectrum's total coupling power (sum of squared
// singular values == squared Frobenius norm) and the independently
// integrated squared kernel norm.
double sum_rule_check(const KernelMatrix& kernel, const LinkGeometry& link,
                      const QuadratureSpec& spec);

// Complex vector field sampled at the patch centers of a surface grid
// (flat u-major order). Eigenfunction exports carry unit total power.
struct FieldMap {
    SurfaceGrid grid;
    std::vector<Eigen::Vector3cd> samples;
};

// n is 1-based; tx maps the n-th right vector, rx the n-th left vector.
FieldMap eigenfunction_field(const ModeSpectrum& spectrum, int n, Side side);

// Expansion coefficients of an x-polarized tx current in the right-vector
// basis, and the received field synthesized from such coefficients
// (keeping the leading `rank` modes; rank < 0 keeps all).
Eigen::VectorXcd project_current(const FieldMap& current, const ModeSpectrum& spectrum);
FieldMap synthesize_field(const Eigen::VectorXcd& coefficients, const ModeSpectrum& spectrum,
                          int rank = -1);

}

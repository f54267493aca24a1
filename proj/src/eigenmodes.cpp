#include "surflink/eigenmodes.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "surflink/errors.hpp"
#include "surflink/green.hpp"

namespace surflink {

namespace {

void check_budget(std::size_t rows, std::size_t cols, std::size_t budget) {
    const std::size_t entries = rows * cols;
    if (entries > budget) {
        throw budget_error("kernel needs " + std::to_string(entries) +
                               " complex entries, budget is " + std::to_string(budget),
                           entries, budget);
    }
}

bool same_grid(const SurfaceGrid& a, const SurfaceGrid& b) {
    return a.n_u == b.n_u && a.n_v == b.n_v && a.delta == b.delta &&
           (a.surface.center - b.surface.center).norm() < 1e-12 &&
           (a.surface.axis_u - b.surface.axis_u).norm() < 1e-12 &&
           (a.surface.axis_v - b.surface.axis_v).norm() < 1e-12;
}

}  // namespace

KernelMatrix assemble_kernel(const LinkGeometry& link, double delta, KernelMode mode,
                             bool parallel, std::size_t entry_budget) {
    KernelMatrix kernel;
    kernel.mode = mode;
    kernel.tx_grid = grid(link.tx, delta);
    kernel.rx_grid = grid(link.rx, delta);
    const int n_t = kernel.tx_grid.count();
    const int n_r = kernel.rx_grid.count();
    const int c = kernel.components();
    check_budget(static_cast<std::size_t>(c) * n_r, n_t, entry_budget);

    kernel.matrix.resize(static_cast<Eigen::Index>(c) * n_r, n_t);
    const double weight = delta * delta;  // delta_T * delta_R
    const Medium medium = link.medium;
    const SurfaceGrid& tg = kernel.tx_grid;
    const SurfaceGrid& rg = kernel.rx_grid;
    auto fill_row = [&](int i) {
        const Eigen::Vector3d r = rg.point(i);
        for (int j = 0; j < n_t; ++j) {
            const Eigen::Vector3cd col = weight * green_column_x(r - tg.point(j), medium);
            if (mode == KernelMode::x_to_vector) {
                kernel.matrix.block<3, 1>(3 * i, j) = col;
            } else {
                kernel.matrix(i, j) = col.x();
            }
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n_r; ++i) fill_row(i);
    } else {
        for (int i = 0; i < n_r; ++i) fill_row(i);
    }
    return kernel;
}

KernelMatrix assemble_reciprocal_kernel(const LinkGeometry& link, double delta,
                                        KernelMode mode, bool parallel,
                                        std::size_t entry_budget) {
    KernelMatrix kernel;
    kernel.mode = mode;
    // roles swap: sources live on the link's rx grid, observations on its tx grid
    kernel.tx_grid = grid(link.rx, delta);
    kernel.rx_grid = grid(link.tx, delta);
    const SurfaceGrid& source = kernel.tx_grid;
    const SurfaceGrid& obs = kernel.rx_grid;
    const int n_s = source.count();
    const int n_o = obs.count();
    const int c = kernel.components();
    check_budget(n_o, static_cast<std::size_t>(c) * n_s, entry_budget);

    kernel.matrix.resize(n_o, static_cast<Eigen::Index>(c) * n_s);
    const double weight = delta * delta;
    const Medium medium = link.medium;
    auto fill_row = [&](int j) {
        const Eigen::Vector3d p = obs.point(j);
        for (int i = 0; i < n_s; ++i) {
            const Eigen::Matrix3cd tensor = green_farfield(p - source.point(i), medium).value;
            if (mode == KernelMode::x_to_vector) {
                kernel.matrix.block<1, 3>(j, 3 * i) = weight * tensor.row(0);
            } else {
                kernel.matrix(j, i) = weight * tensor(0, 0);
            }
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n_o; ++j) fill_row(j);
    } else {
        for (int j = 0; j < n_o; ++j) fill_row(j);
    }
    return kernel;
}

ModeSpectrum solve_modes(const KernelMatrix& kernel) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(kernel.matrix,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw convergence_error("singular value decomposition did not converge");
    }
    ModeSpectrum spectrum;
    spectrum.singular_values = svd.singularValues();
    spectrum.left = svd.matrixU();
    spectrum.right = svd.matrixV();
    spectrum.tx_grid = kernel.tx_grid;
    spectrum.rx_grid = kernel.rx_grid;
    spectrum.mode = kernel.mode;

    // phase convention: rotate each pair so the first significant right-vector
    // component is real-positive; keeps exports reproducible
    for (int n = 0; n < spectrum.modes(); ++n) {
        const auto col = spectrum.right.col(n);
        const double cutoff = 1e-12 * col.cwiseAbs().maxCoeff();
        for (Eigen::Index p = 0; p < col.size(); ++p) {
            const double mag = std::abs(col(p));
            if (mag > cutoff) {
                const std::complex<double> rotation = std::conj(col(p)) / mag;
                spectrum.right.col(n) *= rotation;
                spectrum.left.col(n) *= rotation;
                break;
            }
        }
    }
    return spectrum;
}

int count_dof(const ModeSpectrum& spectrum, double threshold_db) {
    if (spectrum.modes() == 0) throw std::invalid_argument("empty spectrum");
    const double top = spectrum.singular_values(0) * spectrum.singular_values(0);
    // small slack so exact ties at the threshold are counted
    const double floor = top * std::pow(10.0, -threshold_db / 10.0) * (1.0 - 1e-12);
    int count = 0;
    for (int n = 0; n < spectrum.modes(); ++n) {
        const double power = spectrum.singular_values(n) * spectrum.singular_values(n);
        if (power >= floor) ++count;
    }
    return count;
}

double sum_rule_check(const KernelMatrix& kernel, const LinkGeometry& link,
                      const QuadratureSpec& spec) {
    const Medium medium = link.medium;
    const bool full_column = kernel.mode == KernelMode::x_to_vector;
    auto integrand = [&medium, full_column](const Eigen::Vector3d& r, const Eigen::Vector3d& s) {
        const Eigen::Vector3cd col = green_column_x(r - s, medium);
        return full_column ? col.squaredNorm() : std::norm(col.x());
    };
    // patch weights make ||K||_F^2 the midpoint rule for this integral
    const double target = integrate_double_surface(integrand, link.rx, link.tx, spec).value;
    const double discrete = kernel.matrix.squaredNorm();
    return std::abs(discrete - target) / target;
}

FieldMap eigenfunction_field(const ModeSpectrum& spectrum, int n, Side side) {
    if (n < 1 || n > spectrum.modes()) {
        throw std::invalid_argument("mode index " + std::to_string(n) + " exceeds the " +
                                    std::to_string(spectrum.modes()) + " solved modes");
    }
    FieldMap map;
    const int k = n - 1;
    if (side == Side::tx) {
        map.grid = spectrum.tx_grid;
        map.samples.resize(map.grid.count());
        for (int p = 0; p < map.grid.count(); ++p) {
            map.samples[p] = {spectrum.right(p, k), 0.0, 0.0};
        }
    } else {
        map.grid = spectrum.rx_grid;
        map.samples.resize(map.grid.count());
        for (int i = 0; i < map.grid.count(); ++i) {
            if (spectrum.mode == KernelMode::x_to_vector) {
                map.samples[i] = {spectrum.left(3 * i, k), spectrum.left(3 * i + 1, k),
                                  spectrum.left(3 * i + 2, k)};
            } else {
                map.samples[i] = {spectrum.left(i, k), 0.0, 0.0};
            }
        }
    }
    return map;
}

Eigen::VectorXcd project_current(const FieldMap& current, const ModeSpectrum& spectrum) {
    if (!same_grid(current.grid, spectrum.tx_grid)) {
        throw std::invalid_argument("current grid does not match the solver's tx grid");
    }
    Eigen::VectorXcd j(current.samples.size());
    for (std::size_t p = 0; p < current.samples.size(); ++p) j(p) = current.samples[p].x();
    return spectrum.right.adjoint() * j;
}

FieldMap synthesize_field(const Eigen::VectorXcd& coefficients, const ModeSpectrum& spectrum,
                          int rank) {
    if (coefficients.size() != spectrum.modes()) {
        throw std::invalid_argument("coefficient count does not match the solved modes");
    }
    const int keep = rank < 0 ? spectrum.modes() : std::min(rank, spectrum.modes());
    Eigen::VectorXcd weighted = Eigen::VectorXcd::Zero(spectrum.modes());
    for (int n = 0; n < keep; ++n) {
        weighted(n) = spectrum.singular_values(n) * coefficients(n);
    }
    const Eigen::VectorXcd field = spectrum.left * weighted;

    FieldMap map;
    map.grid = spectrum.rx_grid;
    map.samples.resize(map.grid.count());
    for (int i = 0; i < map.grid.count(); ++i) {
        if (spectrum.mode == KernelMode::x_to_vector) {
            map.samples[i] = {field(3 * i), field(3 * i + 1), field(3 * i + 2)};
        } else {
            map.samples[i] = {field(i), 0.0, 0.0};
        }
    }
    return map;
}

}

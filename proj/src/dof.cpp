#include "surflink/dof.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace surflink {

WavenumberSample wavenumber(const Eigen::Vector3d& r, const Eigen::Vector3d& s,
                            const Medium& medium) {
    const Eigen::Vector3d v = r - s;
    const double dist = v.norm();
    if (dist <= 0) throw std::invalid_argument("wavenumber: coincident points");
    return {medium.wavenumber * v.x() / dist, medium.wavenumber * v.y() / dist};
}

double shoelace_area(const std::vector<WavenumberSample>& cycle) {
    double twice = 0;
    const std::size_t n = cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
        const WavenumberSample& a = cycle[i];
        const WavenumberSample& b = cycle[(i + 1) % n];
        twice += a.kx * b.ky - b.kx * a.ky;
    }
    return 0.5 * std::abs(twice);
}

double local_bandwidth_area(const Eigen::Vector3d& r, const RectSurface& tx,
                            const Medium& medium) {
    const Eigen::Vector3d hu = 0.5 * tx.len_u * tx.axis_u;
    const Eigen::Vector3d hv = 0.5 * tx.len_v * tx.axis_v;
    // perimeter order; a zigzag would collapse the quadrilateral
    const Eigen::Vector3d corners[4] = {tx.center - hu - hv, tx.center + hu - hv,
                                        tx.center + hu + hv, tx.center - hu + hv};
    std::vector<WavenumberSample> cycle(4);
    for (int i = 0; i < 4; ++i) cycle[i] = wavenumber(r, corners[i], medium);
    return shoelace_area(cycle);
}

double local_bandwidth(const Eigen::Vector3d& r, const RectSurface& tx, const Medium& medium) {
    return 0.25 * local_bandwidth_area(r, tx, medium);
}

double dof_numeric(const LinkGeometry& link, const QuadratureSpec& spec) {
    const RectSurface& tx = link.tx;
    const Medium& medium = link.medium;
    auto integrand = [&tx, &medium](const Eigen::Vector3d& r) {
        return local_bandwidth_area(r, tx, medium);
    };
    const double pi = std::numbers::pi;
    return integrate_surface(integrand, link.rx, spec).value / (4.0 * pi * pi);
}

double dof_closed_parallel(const LinkGeometry& link) {
    if (link.kind != LinkKind::parallel || !link.centered()) {
        throw std::invalid_argument("dof_closed_parallel expects a centered parallel link");
    }
    const double sx = link.rx.len_u;
    const double sy = link.rx.len_v;
    const double d = link.d;
    const double rx_ = std::sqrt(4 * d * d + sx * sx);
    const double ry_ = std::sqrt(4 * d * d + sy * sy);
    const double bracket = sx * std::atan(sy / rx_) / rx_ + sy * std::atan(sx / ry_) / ry_;
    const double lambda = link.medium.wavelength;
    return 2.0 * link.tx.area() / (lambda * lambda) * bracket;
}

double dof_closed_perpendicular(const LinkGeometry& link) {
    if (link.kind != LinkKind::perpendicular || !link.centered()) {
        throw std::invalid_argument(
            "dof_closed_perpendicular expects a centered perpendicular link");
    }
    const double sx = link.rx.len_u;
    const double sy = link.rx.len_v;
    const double d = link.d;
    const double root = std::sqrt(4 * d * d + sy * sy);
    const double bracket = root * std::atan(sx / (2 * d)) - 2 * d * std::atan(sx / root);
    const double lambda = link.medium.wavelength;
    return 2.0 * link.tx.area() / (lambda * lambda * root) * bracket;
}

double dof_asymptotic_parallel(double tx_area, double wavelength) {
    return std::numbers::pi * tx_area / (wavelength * wavelength);
}

double dof_asymptotic_perpendicular(double tx_area, double wavelength) {
    return dof_asymptotic_parallel(tx_area, wavelength);
}

double dof_farfield_miller(std::pair<double, double> tx_aperture,
                           std::pair<double, double> rx_aperture, double d,
                           double wavelength) {
    return tx_aperture.first * tx_aperture.second * rx_aperture.first * rx_aperture.second /
           (d * d * wavelength * wavelength);
}

double dof_farfield_perpendicular(double tx_area, double rx_area, double rx_len_y, double d,
                                  double wavelength) {
    return tx_area * rx_area * rx_len_y / (4.0 * wavelength * wavelength * d * d * d);
}

int round_modes(double dof) {
    if (!(dof >= 0)) return 1;
    return std::max(1L, std::lround(dof));
}

DofReport dof_report(const LinkGeometry& link, const QuadratureSpec& spec) {
    DofReport report;
    report.d_numeric = dof_numeric(link, spec);
    if (link.centered()) {
        report.d_closed = link.kind == LinkKind::parallel ? dof_closed_parallel(link)
                                                          : dof_closed_perpendicular(link);
    } else {
        report.d_closed = std::numeric_limits<double>::quiet_NaN();
    }
    const double lambda = link.medium.wavelength;
    report.d_asymptotic = dof_asymptotic_parallel(link.tx.area(), lambda);
    report.d_farfield = dof_farfield_miller({link.tx.len_u, link.tx.len_v},
                                            {link.rx.len_u, link.rx.len_v}, link.d, lambda);
    report.d_rounded =
        round_modes(std::isnan(report.d_closed) ? report.d_numeric : report.d_closed);
    return report;
}

}

#include "surflink/linkbudget.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "surflink/green.hpp"

namespace surflink {

double coupling_intensity(const LinkGeometry& link, const QuadratureSpec& spec) {
    const double lambda = link.medium.wavelength;
    auto integrand = [](const Eigen::Vector3d& r, const Eigen::Vector3d& s) {
        const Eigen::Vector3d v = r - s;
        const double transverse = v.y() * v.y() + v.z() * v.z();
        const double r2 = v.squaredNorm();
        return transverse / (r2 * r2);
    };
    return integrate_double_surface(integrand, link.rx, link.tx, spec).value /
           (lambda * lambda);
}

double coupling_intensity_field(const LinkGeometry& link, const QuadratureSpec& spec) {
    const Medium& medium = link.medium;
    auto integrand = [&medium](const Eigen::Vector3d& r, const Eigen::Vector3d& s) {
        return green_column_x(r - s, medium).squaredNorm();
    };
    const double eta = medium.impedance;
    return 4.0 / (eta * eta) * integrate_double_surface(integrand, link.rx, link.tx, spec).value;
}

double tx_directivity(double tx_area, double wavelength) {
    return 4.0 * std::numbers::pi * tx_area / (wavelength * wavelength);
}

double gain_numeric(const LinkGeometry& link, const QuadratureSpec& spec) {
    if (link.kind != LinkKind::parallel) {
        throw std::invalid_argument("gain_numeric expects a parallel link");
    }
    const double d = link.d;
    const double y0 = link.tx.center.y();
    const Eigen::Vector3d s0 = link.tx.center;
    auto integrand = [d, y0, &s0](const Eigen::Vector3d& r) {
        const double dy = r.y() - y0;
        const double dist = (r - s0).norm();
        return (dy * dy + d * d) * d / (dist * dist * dist * dist * dist);
    };
    const double a_t = link.tx.area();
    const double lambda = link.medium.wavelength;
    return a_t / (lambda * lambda) * integrate_surface(integrand, link.rx, spec).value;
}

double gain_closed(const LinkGeometry& link) {
    if (link.kind != LinkKind::parallel || !link.centered()) {
        throw std::invalid_argument("gain_closed expects a centered parallel link");
    }
    const double sx = link.rx.len_u;
    const double sy = link.rx.len_v;
    const double d = link.d;
    const double root = std::sqrt(sx * sx + sy * sy + 4 * d * d);
    const double bracket = sx * sy * d / ((sx * sx + 4 * d * d) * root) +
                           std::atan(sx * sy / (2 * d * root));
    const double lambda = link.medium.wavelength;
    return 8.0 * link.tx.area() / (3.0 * lambda * lambda) * bracket;
}

double gain_closed_square(double F, double tx_area, double wavelength) {
    if (!(F > 0)) throw std::invalid_argument("F must be positive");
    // acot(x) = atan(1/x); only x > 0 is reachable for F > 0
    const double bracket = std::sqrt(2 * F) / (std::sqrt(1 + 2 * F) * (1 + 4 * F)) +
                           2.0 * std::atan(1.0 / std::sqrt(8 * F * (1 + 2 * F)));
    return 4.0 * tx_area / (3.0 * wavelength * wavelength) * bracket;
}

double gain_friis(double tx_area, double rx_area, double d, double wavelength) {
    return tx_area * rx_area / (wavelength * wavelength * d * d);
}

double gain_friis(const LinkGeometry& link) {
    return gain_friis(link.tx.area(), link.rx.area(), link.d, link.medium.wavelength);
}

double gain_large_lis(double tx_area, double wavelength) {
    return 4.0 * std::numbers::pi * tx_area / (3.0 * wavelength * wavelength);
}

double capacity_gain(int modes, double snr) {
    if (modes < 1) throw std::invalid_argument("capacity_gain needs at least one mode");
    if (!(snr > 0)) throw std::invalid_argument("snr must be positive");
    return modes * std::log2(1.0 + snr / modes) / std::log2(1.0 + snr);
}

double spatial_density(int modes, double tx_area) {
    if (modes < 1) throw std::invalid_argument("spatial_density needs at least one mode");
    if (!(tx_area > 0)) throw std::invalid_argument("tx_area must be positive");
    return modes / tx_area;
}

GainReport gain_report(const LinkGeometry& link, const QuadratureSpec& spec) {
    GainReport report;
    report.g_numeric = gain_numeric(link, spec);
    report.g_closed = link.centered() ? gain_closed(link)
                                      : std::numeric_limits<double>::quiet_NaN();
    report.g_friis = gain_friis(link);
    report.g_large_lis = gain_large_lis(link.tx.area(), link.medium.wavelength);
    const double g = std::isnan(report.g_closed) ? report.g_numeric : report.g_closed;
    report.normalized_gain = g / tx_directivity(link.tx.area(), link.medium.wavelength);
    report.tx_small_regime = std::max(link.tx.len_u, link.tx.len_v) <= link.d / 10.0;
    return report;
}

}

#include "surflink/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace surflink {

namespace {

// distance from x to the interval [-half, half]
double interval_distance(double x, double half) {
    return std::max(0.0, std::abs(x) - half);
}

void require_positive(double value, const char* what) {
    if (!(value > 0)) {
        throw std::invalid_argument(std::string(what) + " must be positive");
    }
}

}  // namespace

Medium Medium::free_space(double wavelength_m) {
    require_positive(wavelength_m, "wavelength");
    Medium m;
    m.wavelength = wavelength_m;
    m.wavenumber = 2.0 * std::numbers::pi / wavelength_m;
    m.impedance = free_space_impedance_ohm;
    m.speed_of_light = speed_of_light_mps;
    m.angular_frequency = m.wavenumber * m.speed_of_light;
    return m;
}

void RectSurface::validate() const {
    constexpr double tol = 1e-12;
    if (std::abs(axis_u.norm() - 1.0) > tol || std::abs(axis_v.norm() - 1.0) > tol) {
        throw std::invalid_argument("surface axes must be unit vectors");
    }
    if (std::abs(axis_u.dot(axis_v)) > tol) {
        throw std::invalid_argument("surface axes must be orthogonal");
    }
    require_positive(len_u, "surface side");
    require_positive(len_v, "surface side");
}

bool LinkGeometry::centered() const {
    const double tol = 1e-12 * d;
    return std::abs(tx.center.x()) <= tol && std::abs(tx.center.y()) <= tol;
}

double LinkGeometry::min_distance() const {
    // rx occupies z = 0, |x| <= rx.len_u/2, |y| <= rx.len_v/2
    const double rxu = 0.5 * rx.len_u;
    const double rxv = 0.5 * rx.len_v;
    const double x0 = tx.center.x();
    const double y0 = tx.center.y();
    if (kind == LinkKind::parallel) {
        const double dx = interval_distance(x0, rxu + 0.5 * tx.len_u);
        const double dy = interval_distance(y0, rxv + 0.5 * tx.len_v);
        return std::sqrt(dx * dx + dy * dy + d * d);
    }
    // perpendicular: tx spans x in x0 +- len_u/2 at y = y0, z in d +- len_v/2
    const double dx = interval_distance(x0, rxu + 0.5 * tx.len_u);
    const double dy = interval_distance(y0, rxv);
    const double dz = std::max(0.0, d - 0.5 * tx.len_v);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

LinkGeometry make_link(LinkKind kind, double d, std::pair<double, double> tx_size,
                       std::pair<double, double> rx_size,
                       std::pair<double, double> tx_center_offset, const Medium& medium) {
    require_positive(d, "separation d");
    require_positive(tx_size.first, "tx size");
    require_positive(tx_size.second, "tx size");
    require_positive(rx_size.first, "rx size");
    require_positive(rx_size.second, "rx size");

    LinkGeometry link;
    link.kind = kind;
    link.medium = medium;
    link.d = d;

    link.rx.center = {0, 0, 0};
    link.rx.axis_u = {1, 0, 0};
    link.rx.axis_v = {0, 1, 0};
    link.rx.len_u = rx_size.first;
    link.rx.len_v = rx_size.second;

    link.tx.center = {tx_center_offset.first, tx_center_offset.second, d};
    link.tx.axis_u = {1, 0, 0};
    link.tx.axis_v = kind == LinkKind::parallel ? Eigen::Vector3d{0, 1, 0}
                                                : Eigen::Vector3d{0, 0, 1};
    link.tx.len_u = tx_size.first;
    link.tx.len_v = tx_size.second;

    link.tx.validate();
    link.rx.validate();

    if (d <= medium.wavelength) {
        throw std::invalid_argument("separation d must exceed one wavelength (reactive near field)");
    }
    const double gap = link.min_distance();
    if (gap < medium.wavelength * (1.0 - 1e-12)) {
        throw std::invalid_argument("surfaces closer than one wavelength (gap " +
                                    std::to_string(gap) + " m)");
    }
    return link;
}

}  // namespace

LinkGeometry make_parallel_link(double d, std::pair<double, double> tx_size,
                                std::pair<double, double> rx_size,
                                std::pair<double, double> tx_center_offset,
                                const Medium& medium) {
    return make_link(LinkKind::parallel, d, tx_size, rx_size, tx_center_offset, medium);
}

LinkGeometry make_perpendicular_link(double d, std::pair<double, double> tx_size,
                                     std::pair<double, double> rx_size,
                                     std::pair<double, double> tx_center_offset,
                                     const Medium& medium) {
    return make_link(LinkKind::perpendicular, d, tx_size, rx_size, tx_center_offset, medium);
}

SurfaceGrid grid(const RectSurface& surface, double delta) {
    require_positive(delta, "patch side");
    surface.validate();

    SurfaceGrid g;
    g.surface = surface;
    g.delta = delta;
    g.n_u = static_cast<int>(std::lround(surface.len_u / delta));
    g.n_v = static_cast<int>(std::lround(surface.len_v / delta));
    if (g.n_u < 1 || g.n_v < 1 ||
        std::abs(g.n_u * delta - surface.len_u) > 1e-3 * surface.len_u ||
        std::abs(g.n_v * delta - surface.len_v) > 1e-3 * surface.len_v) {
        throw std::invalid_argument("patch side does not tile the surface");
    }
    return g;
}

}

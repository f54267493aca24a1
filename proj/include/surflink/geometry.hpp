#pragma once

#include <Eigen/Dense>
#include <utility>

namespace surflink {

inline constexpr double free_space_impedance_ohm = 376.730313668;
inline constexpr double speed_of_light_mps = 299792458.0;

// Monochromatic free-space propagation context.
struct Medium {
    double wavelength;         // [m]
    double wavenumber;         // [rad/m], 2*pi/wavelength
    double impedance;          // [ohm]
    double speed_of_light;     // [m/s]
    double angular_frequency;  // [rad/s]

    static Medium free_space(double wavelength_m);
};

// Flat rectangular aperture with an orthonormal in-plane frame.
struct RectSurface {
    Eigen::Vector3d center{0, 0, 0};
    Eigen::Vector3d axis_u{1, 0, 0};
    Eigen::Vector3d axis_v{0, 1, 0};
    double len_u = 0;  // side along axis_u [m]
    double len_v = 0;  // side along axis_v [m]

    Eigen::Vector3d normal() const { return axis_u.cross(axis_v); }
    double area() const { return len_u * len_v; }

    // point at in-plane offsets from the center, u in [-len_u/2, len_u/2]
    Eigen::Vector3d point(double u, double v) const { return center + u * axis_u + v * axis_v; }

    void validate() const;  // throws std::invalid_argument on a degenerate frame
};

enum class LinkKind { parallel, perpendicular };

// Transmit + receive surface pair. The rx surface always lies in the z=0
// plane centered at the origin; the tx surface sits above it at height d.
struct LinkGeometry {
    RectSurface tx;
    RectSurface rx;
    Medium medium{};
    LinkKind kind = LinkKind::parallel;
    double d = 0;  // center separation projected on the rx normal [m]

    double fresnel_ratio() const { return d * d / rx.area(); }  // F = d^2 / A_R
    double rx_aspect_ratio() const { return rx.len_u / rx.len_v; }
    bool centered() const;  // tx center straight above the rx center

    // exact minimum point-to-point distance between the two rectangles
    double min_distance() const;
};

// tx parallel to rx: tx spans (len x, len y) at center (offset_x, offset_y, d).
LinkGeometry make_parallel_link(double d,
                                std::pair<double, double> tx_size,
                                std::pair<double, double> rx_size,
                                std::pair<double, double> tx_center_offset,
                                const Medium& medium);

// tx standing in an xz-parallel plane (sides len x, len z), same center rule.
LinkGeometry make_perpendicular_link(double d,
                                     std::pair<double, double> tx_size,
                                     std::pair<double, double> rx_size,
                                     std::pair<double, double> tx_center_offset,
                                     const Medium& medium);

// Uniform tiling of a surface into square patches of side delta,
// sampled at patch centers.
struct SurfaceGrid {
    RectSurface surface;
    int n_u = 0;
    int n_v = 0;
    double delta = 0;  // patch side [m]

    int count() const { return n_u * n_v; }
    double patch_area() const { return delta * delta; }

    Eigen::Vector3d point(int i, int j) const {
        return surface.point((i + 0.5) * delta - 0.5 * surface.len_u,
                             (j + 0.5) * delta - 0.5 * surface.len_v);
    }
    // flat index, u-major: flat = i * n_v + j
    Eigen::Vector3d point(int flat) const { return point(flat / n_v, flat % n_v); }
};

SurfaceGrid grid(const RectSurface& surface, double delta);

}

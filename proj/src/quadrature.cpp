#include "surflink/quadrature.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace surflink {

namespace {

struct GaussRule {
    std::vector<double> nodes;    // ascending, on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
GaussRule build_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::scoped_lock lock(mutex);
    auto [it, inserted] = cache.try_emplace(n);
    if (inserted) it->second = build_gauss_rule(n);
    return it->second;
}

template <int D>
struct Panel {
    std::array<double, D> lo{};
    std::array<double, D> hi{};
    std::array<int, D> depth{};
};

template <class T, int D>
struct PanelEstimate {
    T value{};
    double error = 0;
    int worst_axis = 0;
};

template <class T, int D, class F>
T tensor_rule(const F& f, const Panel<D>& p, const std::array<int, D>& nodes) {
    std::array<std::vector<double>, D> xs, ws;
    for (int a = 0; a < D; ++a) {
        const GaussRule& rule = gauss_rule(nodes[a]);
        const double mid = 0.5 * (p.lo[a] + p.hi[a]);
        const double half = 0.5 * (p.hi[a] - p.lo[a]);
        xs[a].resize(nodes[a]);
        ws[a].resize(nodes[a]);
        for (int i = 0; i < nodes[a]; ++i) {
            xs[a][i] = mid + half * rule.nodes[i];
            ws[a][i] = half * rule.weights[i];
        }
    }
    T sum{};
    std::array<double, D> point{};
    // depth-first tensor loop; the fixed iteration order keeps sums reproducible
    auto walk = [&](auto&& self, int axis, double weight) -> void {
        if (axis == D) {
            sum += weight * f(point);
            return;
        }
        for (int i = 0; i < nodes[axis]; ++i) {
            point[axis] = xs[axis][i];
            self(self, axis + 1, weight * ws[axis][i]);
        }
    };
    walk(walk, 0, 1.0);
    return sum;
}

template <class T, int D, class F>
PanelEstimate<T, D> estimate_panel(const F& f, const Panel<D>& p, int nodes_per_axis) {
    std::array<int, D> full{};
    full.fill(nodes_per_axis);
    PanelEstimate<T, D> est;
    est.value = tensor_rule<T, D>(f, p, full);
    double worst = -1;
    for (int a = 0; a < D; ++a) {
        std::array<int, D> halved = full;
        halved[a] = nodes_per_axis / 2;
        const double err = std::abs(est.value - tensor_rule<T, D>(f, p, halved));
        est.error += err;
        if (err > worst) {
            worst = err;
            est.worst_axis = a;
        }
    }
    return est;
}

template <class T, int D, class F>
void evaluate_batch(const F& f, const std::vector<Panel<D>>& panels,
                    const std::vector<std::size_t>& pending,
                    std::vector<PanelEstimate<T, D>>& out, int nodes_per_axis,
                    bool parallel) {
    const long long m = static_cast<long long>(pending.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < m; ++i) {
            out[pending[i]] = estimate_panel<T, D>(f, panels[pending[i]], nodes_per_axis);
        }
    } else {
        for (long long i = 0; i < m; ++i) {
            out[pending[i]] = estimate_panel<T, D>(f, panels[pending[i]], nodes_per_axis);
        }
    }
}

template <class T, int D, class F>
std::pair<T, double> adapt(const F& f, const std::array<double, D>& lo,
                           const std::array<double, D>& hi, int nodes_per_axis,
                           const QuadratureSpec& spec) {
    if (nodes_per_axis < 2) throw std::invalid_argument("quadrature needs >= 2 nodes per axis");
    if (!(spec.rel_tol > 0)) throw std::invalid_argument("quadrature rel_tol must be positive");
    if (spec.initial_panels < 1) throw std::invalid_argument("initial_panels must be >= 1");

    // initial uniform grid, lexicographic panel order
    std::vector<Panel<D>> panels;
    const int g = spec.initial_panels;
    int total = 1;
    for (int a = 0; a < D; ++a) total *= g;
    panels.reserve(total);
    for (int t = 0; t < total; ++t) {
        Panel<D> p;
        int rem = t;
        for (int a = D - 1; a >= 0; --a) {
            const int cell = rem % g;
            rem /= g;
            const double w = (hi[a] - lo[a]) / g;
            p.lo[a] = lo[a] + cell * w;
            p.hi[a] = p.lo[a] + w;
        }
        panels.push_back(p);
    }
    std::vector<PanelEstimate<T, D>> estimates(panels.size());
    std::vector<std::size_t> pending(panels.size());
    for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;
    evaluate_batch<T, D>(f, panels, pending, estimates, nodes_per_axis, spec.parallel);

    constexpr std::size_t panel_budget = 1u << 21;
    while (true) {
        T value{};
        double error = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            value += estimates[i].value;
            error += estimates[i].error;
        }
        if (error <= spec.rel_tol * std::abs(value) || error == 0) return {value, error};

        // split every panel above the equidistributed error share
        const double share = spec.rel_tol * std::abs(value) / panels.size();
        std::vector<Panel<D>> next;
        std::vector<PanelEstimate<T, D>> next_estimates;
        next.reserve(panels.size() * 2);
        next_estimates.reserve(panels.size() * 2);
        pending.clear();
        for (std::size_t i = 0; i < panels.size(); ++i) {
            if (estimates[i].error > share) {
                const int ax = estimates[i].worst_axis;
                if (panels[i].depth[ax] >= spec.max_subdivisions) {
                    throw convergence_error("quadrature did not converge within the subdivision limit");
                }
                Panel<D> a = panels[i], b = panels[i];
                const double mid = 0.5 * (panels[i].lo[ax] + panels[i].hi[ax]);
                a.hi[ax] = mid;
                b.lo[ax] = mid;
                ++a.depth[ax];
                ++b.depth[ax];
                pending.push_back(next.size());
                next.push_back(a);
                next_estimates.emplace_back();
                pending.push_back(next.size());
                next.push_back(b);
                next_estimates.emplace_back();
            } else {
                next.push_back(panels[i]);
                next_estimates.push_back(estimates[i]);
            }
        }
        if (pending.empty()) return {value, error};  // nothing splittable; accept
        if (next.size() > panel_budget) {
            throw convergence_error("quadrature panel budget exceeded");
        }
        panels.swap(next);
        estimates.swap(next_estimates);
        evaluate_batch<T, D>(f, panels, pending, estimates, nodes_per_axis, spec.parallel);
    }
}

template <class T, class F>
std::pair<T, double> surface_integral(const F& f, const RectSurface& surface,
                                      const QuadratureSpec& spec) {
    surface.validate();
    const std::array<double, 2> lo{-0.5 * surface.len_u, -0.5 * surface.len_v};
    const std::array<double, 2> hi{0.5 * surface.len_u, 0.5 * surface.len_v};
    auto g = [&](const std::array<double, 2>& uv) { return f(surface.point(uv[0], uv[1])); };
    return adapt<T, 2>(g, lo, hi, spec.nodes_per_axis, spec);
}

template <class T, class F>
std::pair<T, double> double_surface_integral(const F& f, const RectSurface& s1,
                                             const RectSurface& s2,
                                             const QuadratureSpec& spec) {
    s1.validate();
    s2.validate();
    const std::array<double, 4> lo{-0.5 * s1.len_u, -0.5 * s1.len_v, -0.5 * s2.len_u,
                                   -0.5 * s2.len_v};
    const std::array<double, 4> hi{0.5 * s1.len_u, 0.5 * s1.len_v, 0.5 * s2.len_u,
                                   0.5 * s2.len_v};
    auto g = [&](const std::array<double, 4>& q) {
        return f(s1.point(q[0], q[1]), s2.point(q[2], q[3]));
    };
    return adapt<T, 4>(g, lo, hi, spec.nodes_per_axis_pair, spec);
}

}  // namespace

QuadratureResult integrate_surface(const SurfaceIntegrand& f, const RectSurface& surface,
                                   const QuadratureSpec& spec) {
    auto [value, error] = surface_integral<double>(f, surface, spec);
    return {value, error};
}

ComplexQuadratureResult integrate_surface_complex(const ComplexSurfaceIntegrand& f,
                                          const RectSurface& surface,
                                          const QuadratureSpec& spec) {
    auto [value, error] = surface_integral<std::complex<double>>(f, surface, spec);
    return {value, error};
}

QuadratureResult integrate_double_surface(const SurfacePairIntegrand& f, const RectSurface& s1,
                                          const RectSurface& s2, const QuadratureSpec& spec) {
    auto [value, error] = double_surface_integral<double>(f, s1, s2, spec);
    return {value, error};
}

ComplexQuadratureResult integrate_double_surface_complex(const ComplexSurfacePairIntegrand& f,
                                                 const RectSurface& s1, const RectSurface& s2,
                                                 const QuadratureSpec& spec) {
    auto [value, error] = double_surface_integral<std::complex<double>>(f, s1, s2, spec);
    return {value, error};
}

}

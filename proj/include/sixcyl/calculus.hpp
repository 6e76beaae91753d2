#pragma once

/**
 * @file calculus.hpp
 * @brief Perturbation chart around a curve point and numerical
 *        differentiation of squared-distance observables on it.
 *
 * The chart has 15 coordinates J_u for J in {B,...,F} and u in
 * {kappa, phi, delta}, ordered B_kappa, B_phi, B_delta, C_kappa, ...,
 * F_delta.  Line A is pinned, which removes the SO(3) freedom.  A coordinate
 * c displaces the corresponding family parameter of line J by theta_u * c:
 * line J sits at latitude s_J (phi + theta_phi c_phi), longitude
 * k0_J + sk_J (kappa + theta_kappa c_kappa), clock angle
 * delta + theta_delta c_delta.
 *
 * A full 18-coordinate variant (A included) is provided because the
 * symmetry operators of the galois module move line A.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "sixcyl/configuration.hpp"
#include "sixcyl/error.hpp"

namespace sixcyl {

enum class angle : int { kappa = 0, phi = 1, delta = 2 };

inline constexpr std::size_t chart_dim = 15;
inline constexpr std::size_t full_chart_dim = 18;

/// Index of J_u in the pinned 15-coordinate chart (J != A).
inline std::size_t chart_index(label j, angle u) {
    if (j == label::A) throw error(errc::invalid_argument, "line A is pinned");
    return static_cast<std::size_t>(3 * (index_of(j) - 1) + static_cast<int>(u));
}

/// Index of J_u in the full 18-coordinate chart.
inline std::size_t full_index(label j, angle u) {
    return static_cast<std::size_t>(3 * index_of(j) + static_cast<int>(u));
}

/// Per-angle normalization constants of the chart.
struct chart_norms {
    double kappa = 1.0;
    double phi = 1.0;
    double delta = 1.0;

    double operator[](angle u) const {
        switch (u) {
        case angle::kappa: return kappa;
        case angle::phi: return phi;
        case angle::delta: return delta;
        }
        return 1.0;
    }

    /// Constants at the record point x = 1/2.
    static chart_norms record() {
        return {11.0 / (32.0 * std::sqrt(3.0)), 11.0 / (4.0 * std::sqrt(6.0)), 11.0 * std::sqrt(11.0) / 48.0};
    }

    /// Generic-x constants: unit kappa/phi steps, delta step p_x^2 / q_x.
    static chart_norms generic(double x) {
        const double p2 = (1.0 + x) * (1.0 + 3.0 * x) / 3.0;
        const double q = std::sqrt((1.0 + x) / (3.0 * x * (1.0 - x) * (1.0 + 7.0 * x + 4.0 * x * x)));
        return {1.0, 1.0, p2 / q};
    }
};

using coords = std::vector<double>;

template <typename Real = double>
struct perturbation_chart {
    double x = 0.5;  ///< curve parameter of the base point
    curve_angles<Real> base;
    chart_norms norms;

    /// Chart at the curve point with parameter x and the given norms.
    static perturbation_chart at(double x, chart_norms n) {
        make_curve_point(x);  // range check
        return {x, curve_angles_at(Real(x)), n};
    }

    /// Chart at the record point with the record norms.
    static perturbation_chart record() { return at(0.5, chart_norms::record()); }

    /// The same chart with the base point recomputed in another precision.
    template <typename Other>
    perturbation_chart<Other> with_precision() const {
        return perturbation_chart<Other>::at(x, norms);
    }

    tangent_line<Real> line(label j, const Real& ck, const Real& cp, const Real& cd) const {
        return place_line(j, base.phi + Real(norms.phi) * cp, base.delta + Real(norms.delta) * cd,
                          base.kappa + Real(norms.kappa) * ck);
    }

    /// Configuration at full 18-vector coordinates (A included).
    template <typename Vec>
    configuration<Real> embed_full(const Vec& c) const {
        if (c.size() != full_chart_dim) throw error(errc::invalid_argument, "expected 18 coordinates");
        configuration<Real> cfg;
        for (label j : all_labels) {
            const std::size_t i = full_index(j, angle::kappa);
            cfg[j] = line(j, Real(c[i]), Real(c[i + 1]), Real(c[i + 2]));
        }
        return cfg;
    }

    /// Configuration at pinned 15-vector coordinates; A stays at the base.
    template <typename Vec>
    configuration<Real> embed(const Vec& c) const {
        if (c.size() != chart_dim) throw error(errc::invalid_argument, "expected 15 coordinates");
        configuration<Real> cfg;
        cfg[label::A] = line(label::A, Real(0), Real(0), Real(0));
        for (label j : all_labels) {
            if (j == label::A) continue;
            const std::size_t i = chart_index(j, angle::kappa);
            cfg[j] = line(j, Real(c[i]), Real(c[i + 1]), Real(c[i + 2]));
        }
        return cfg;
    }

    configuration<Real> base_config() const { return embed(std::vector<Real>(chart_dim, Real(0))); }
};

/// A scalar observable on a chart: f(coords) -> value.
using smooth_map = std::function<double(const coords&)>;

/**
 * F_pair(c) = d^2(pair at embed(c)) - d^2(pair at base), on the pinned
 * chart.  F_pair(0) is exactly zero.  Evaluated in long double: finite
 * differences divide the value roundoff by h^2, and the restricted form
 * magnifies it further.
 */
inline smooth_map pair_map(const perturbation_chart<double>& chart, line_pair p) {
    const auto hp = chart.with_precision<long double>();
    const long double base = pair_distance_sq(hp.base_config(), p);
    return [hp, p, base](const coords& c) { return static_cast<double>(pair_distance_sq(hp.embed(c), p) - base); };
}

/// Same observable on the full 18-coordinate chart.
inline smooth_map pair_map_full(const perturbation_chart<double>& chart, line_pair p) {
    const auto hp = chart.with_precision<long double>();
    const long double base = pair_distance_sq(hp.base_config(), p);
    return [hp, p, base](const coords& c) {
        return static_cast<double>(pair_distance_sq(hp.embed_full(c), p) - base);
    };
}

namespace detail {

inline double checked(const smooth_map& f, const coords& x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw error(errc::nonfinite_evaluation);
    return v;
}

} // namespace detail

inline constexpr double gradient_step = 1e-4;
inline constexpr double hessian_step = 1e-3;

/**
 * Central-difference gradient with one Richardson level:
 * g = (4 D(h/2) - D(h)) / 3, where D(h) is the central difference.
 *
 * @throws error(errc::nonfinite_evaluation) if a probe is not finite.
 */
inline std::vector<double> gradient(const smooth_map& f, const coords& at, double h = gradient_step) {
    const std::size_t n = at.size();
    std::vector<double> g(n);
    coords x = at;
    for (std::size_t i = 0; i < n; ++i) {
        auto central = [&](double step) {
            x[i] = at[i] + step;
            const double fp = detail::checked(f, x);
            x[i] = at[i] - step;
            const double fm = detail::checked(f, x);
            x[i] = at[i];
            return (fp - fm) / (2.0 * step);
        };
        const double d1 = central(h);
        const double d2 = central(h / 2.0);
        g[i] = (4.0 * d2 - d1) / 3.0;
    }
    return g;
}

/// Dense row-major symmetric matrix.
struct sym_matrix {
    std::size_t n = 0;
    std::vector<double> a;

    sym_matrix() = default;
    explicit sym_matrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

namespace detail {

/// Central second-difference Hessian at a single step, symmetrized.
inline sym_matrix hessian_at_step(const smooth_map& f, const coords& at, double h) {
    const std::size_t n = at.size();
    sym_matrix H(n);
    coords x = at;
    const double f0 = checked(f, at);
    auto eval = [&](std::size_t i, double si, std::size_t j, double sj) {
        x = at;
        x[i] += si * h;
        x[j] += sj * h;
        return checked(f, x);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double fp = eval(i, 1.0, i, 0.0);
        const double fm = eval(i, -1.0, i, 0.0);
        H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double pp = eval(i, 1.0, j, 1.0);
            const double pm = eval(i, 1.0, j, -1.0);
            const double mp = eval(i, -1.0, j, 1.0);
            const double mm = eval(i, -1.0, j, -1.0);
            H(i, j) = H(j, i) = (pp - pm - mp + mm) / (4.0 * h * h);
        }
    }
    return H;
}

} // namespace detail

/**
 * Central second-difference Hessian with one Richardson level:
 * H = (4 D(h/2) - D(h)) / 3.  At the record point a single level at
 * h = 1e-3 moves the restricted form (entries up to ~8000) by ~1e-2; the
 * extrapolated Hessian of the long-double pair maps reproduces it to ~2e-8.
 *
 * @throws error(errc::nonfinite_evaluation) if a probe is not finite.
 */
inline sym_matrix hessian(const smooth_map& f, const coords& at, double h = hessian_step) {
    const sym_matrix coarse = detail::hessian_at_step(f, at, h);
    sym_matrix fine = detail::hessian_at_step(f, at, h / 2.0);
    for (std::size_t k = 0; k < fine.a.size(); ++k) fine.a[k] = (4.0 * fine.a[k] - coarse.a[k]) / 3.0;
    return fine;
}

/// Pointwise minimum of a family of maps.
inline smooth_map min_of(std::vector<smooth_map> maps) {
    return [maps = std::move(maps)](const coords& c) {
        double m = INFINITY;
        for (const auto& f : maps) m = std::min(m, f(c));
        return m;
    };
}

/// Result of a log-log decay fit along a ray.
struct decay_profile {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< max |log|F(t)| - fit| over the grid
    int order = 0;          ///< 1, 2, or 0 for "other"
};

inline constexpr double slope_tolerance = 0.1;
inline constexpr double profile_residual_threshold = 0.1;

/**
 * Fits log|F(t dir)| against log t over the grid and classifies the decay
 * order (1 or 2, within +-0.1 of the slope; 0 otherwise).
 *
 * @throws error(errc::invalid_argument) for an empty grid, non-positive t
 *         or a zero direction.
 * @throws error(errc::inconclusive) when a value vanishes or the fit
 *         residual exceeds the threshold.
 */
inline decay_profile directional_profile(const smooth_map& f, const coords& direction,
                                         const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw error(errc::invalid_argument, "t grid needs at least two points");
    double dn = 0.0;
    for (double v : direction) dn += v * v;
    if (!(dn > 0.0)) throw error(errc::invalid_argument, "zero direction");
    std::vector<double> lx, ly;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw error(errc::invalid_argument, "t must be positive");
        coords c(direction.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = t * direction[i];
        const double v = detail::checked(f, c);
        if (v == 0.0) throw error(errc::inconclusive, "vanishing value on the ray");
        lx.push_back(std::log(t));
        ly.push_back(std::log(std::abs(v)));
    }
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    decay_profile p;
    p.slope = sxy / sxx;
    p.intercept = my - p.slope * mx;
    for (std::size_t i = 0; i < lx.size(); ++i)
        p.residual = std::max(p.residual, std::abs(ly[i] - (p.intercept + p.slope * lx[i])));
    if (p.residual > profile_residual_threshold) throw error(errc::inconclusive, "log-log fit residual too large");
    if (std::abs(p.slope - 1.0) <= slope_tolerance) p.order = 1;
    else if (std::abs(p.slope - 2.0) <= slope_tolerance) p.order = 2;
    return p;
}

/// Geometric grid from t_max down to t_min with the given number of points.
inline std::vector<double> geometric_grid(double t_max, double t_min, std::size_t points) {
    std::vector<double> g(points);
    const double r = std::log(t_min / t_max) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = t_max * std::exp(r * static_cast<double>(i));
    return g;
}

} // namespace sixcyl

#pragma once

/**
 * @file geometry.hpp
 * @brief Tangent lines to the unit sphere, their Euclidean frames and the
 *        distance between two such lines.
 *
 * A tangent line is described by the latitude phi and longitude kappa of its
 * tangency point P and by a clock angle delta: the direction is obtained by
 * rotating the north-pointing tangent
 *
 *     up = (-sin phi cos kappa, -sin phi sin kappa, cos phi)
 *
 * counterclockwise (seen from the tip of P) about the radial axis:
 *
 *     xi = cos delta * up + sin delta * (P x up).
 *
 * Lines are unoriented, so delta lives in [0, pi).  Everything is templated
 * on the scalar type so that the same code runs in double and in Boost
 * multiprecision floats (used for high-accuracy Taylor probes).
 */

#include <array>
#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "sixcyl/error.hpp"

namespace sixcyl {

template <typename Real>
using vec3 = std::array<Real, 3>;

template <typename Real>
inline vec3<Real> operator+(const vec3<Real>& a, const vec3<Real>& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <typename Real>
inline vec3<Real> operator-(const vec3<Real>& a, const vec3<Real>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

template <typename Real>
inline vec3<Real> operator*(const Real& s, const vec3<Real>& a) {
    return {s * a[0], s * a[1], s * a[2]};
}

template <typename Real>
inline Real dot(const vec3<Real>& a, const vec3<Real>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename Real>
inline vec3<Real> cross(const vec3<Real>& a, const vec3<Real>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <typename Real>
inline Real det3(const vec3<Real>& a, const vec3<Real>& b, const vec3<Real>& c) {
    return dot(a, cross(b, c));
}

template <typename Real>
inline Real norm(const vec3<Real>& a) {
    using std::sqrt;
    return sqrt(dot(a, a));
}

template <typename Real>
inline Real pi() {
    return boost::math::constants::pi<Real>();
}

/// A tangent line in (latitude, longitude, clock angle) coordinates.
template <typename Real = double>
struct tangent_line {
    Real phi{};    ///< latitude in [-pi/2, pi/2]
    Real kappa{};  ///< longitude, reduced to [0, 2 pi)
    Real delta{};  ///< clock angle, reduced to [0, pi)

    /// Same line with kappa reduced mod 2 pi and delta reduced mod pi.
    tangent_line normalized() const {
        using std::fmod;
        const Real two_pi = 2 * pi<Real>();
        Real k = fmod(kappa, two_pi);
        if (k < 0) k += two_pi;
        Real d = fmod(delta, pi<Real>());
        if (d < 0) d += pi<Real>();
        return {phi, k, d};
    }
};

/// Tangency point and unit direction of a tangent line.
template <typename Real = double>
struct line_frame {
    vec3<Real> point{};
    vec3<Real> direction{};
};

/// North-pointing unit tangent at latitude phi, longitude kappa.
template <typename Real>
inline vec3<Real> north_tangent(const Real& phi, const Real& kappa) {
    using std::cos;
    using std::sin;
    return {-sin(phi) * cos(kappa), -sin(phi) * sin(kappa), cos(phi)};
}

/// Euclidean frame (P, xi) of a tangent line.  Total after normalization.
template <typename Real>
line_frame<Real> frame_of(const tangent_line<Real>& line) {
    using std::cos;
    using std::sin;
    const tangent_line<Real> l = line.normalized();
    const vec3<Real> p{cos(l.phi) * cos(l.kappa), cos(l.phi) * sin(l.kappa), sin(l.phi)};
    const vec3<Real> up = north_tangent(l.phi, l.kappa);
    const vec3<Real> side = cross(p, up);
    const Real c = cos(l.delta);
    const Real s = sin(l.delta);
    return {p, c * up + s * side};
}

/// Squared-sine threshold below which two directions count as parallel.
inline constexpr double parallel_threshold = 1e-12;

/**
 * Squared distance between two lines given by frames.
 *
 * Skew lines: det^2[xi', xi'', x'' - x'] / (1 - <xi', xi''>^2).
 * Parallel lines (1 - <xi', xi''>^2 below the threshold): the distance from
 * x'' to the line through x' along xi'.
 *
 * The squared sine is evaluated as |xi' x xi''|^2: the form 1 - c^2 loses
 * all relative accuracy for nearly parallel directions.
 */
template <typename Real>
Real distance_sq(const line_frame<Real>& u, const line_frame<Real>& v) {
    const vec3<Real> w = v.point - u.point;
    const vec3<Real> n = cross(u.direction, v.direction);
    const Real sin2 = dot(n, n);
    if (sin2 < Real(parallel_threshold)) {
        const vec3<Real> perp = w - dot(w, u.direction) * u.direction;
        return dot(perp, perp);
    }
    const Real det = dot(n, w);
    return det * det / sin2;
}

template <typename Real>
Real distance_sq(const tangent_line<Real>& u, const tangent_line<Real>& v) {
    return distance_sq(frame_of(u), frame_of(v));
}

/// Euclidean distance between two tangent lines (units of the sphere radius).
template <typename Real>
Real distance(const tangent_line<Real>& u, const tangent_line<Real>& v) {
    using std::sqrt;
    return sqrt(distance_sq(u, v));
}

template <typename Real>
Real distance(const line_frame<Real>& u, const line_frame<Real>& v) {
    using std::sqrt;
    return sqrt(distance_sq(u, v));
}

/**
 * Squared distance from the explicit trigonometric formula in the angle
 * coordinates.  Independent of the frame construction; used as an oracle.
 *
 * @throws error(errc::degenerate_clock_angle) when |cos delta_i| < 1e-9.
 */
template <typename Real>
Real distance_sq_angles(const tangent_line<Real>& u, const tangent_line<Real>& v) {
    using std::abs;
    using std::cos;
    using std::sin;
    using std::tan;
    if (abs(cos(u.delta)) < Real(1e-9) || abs(cos(v.delta)) < Real(1e-9))
        throw error(errc::degenerate_clock_angle);
    const Real t1 = tan(u.delta);
    const Real t2 = tan(v.delta);
    const Real dk = u.kappa - v.kappa;
    const Real s1 = sin(u.phi), s2 = sin(v.phi);
    const Real c1 = cos(u.phi), c2 = cos(v.phi);
    const Real n = (t1 + t2) * (c1 * c2 - cos(dk) * (1 - s1 * s2)) - (1 - t1 * t2) * sin(dk) * (s1 - s2);
    const Real d = c1 * c2 + cos(dk) * (s1 * s2 + t1 * t2) + sin(dk) * (t2 * s1 - t1 * s2);
    return n * n / ((1 + t1 * t1) * (1 + t2 * t2) - d * d);
}

/**
 * Radius of mutually touching cylinders around two tangent lines at
 * distance d: r = d / (2 - d).
 *
 * @throws error(errc::gap_out_of_range) for d < 0 or d >= 2.
 */
inline double radius_from_gap(double d) {
    if (!(d >= 0.0) || !(d < 2.0)) throw error(errc::gap_out_of_range);
    return d / (2.0 - d);
}

} // namespace sixcyl

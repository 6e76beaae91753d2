#pragma once

/**
 * @file configuration.hpp
 * @brief The D3-symmetric family C6(phi, delta, kappa) of six tangent lines,
 *        the extremal curve through it, the record point and the
 *        min-distance functional.
 *
 * Label pattern (s = latitude sign, k0 = base longitude, sk = kappa sense):
 *
 *     A: (+1, pi/6,   +1)   D: (-1, pi/2,   -1)
 *     B: (+1, 5pi/6,  +1)   E: (-1, 7pi/6,  -1)
 *     C: (+1, 3pi/2,  +1)   F: (-1, 11pi/6, -1)
 *
 * Line J sits at latitude s*phi, longitude k0 + sk*kappa and clock angle
 * delta.  With this orientation of kappa the record constants
 * (kappa_m < 0, delta_m > 0) put all twelve relevant distances at
 * sqrt(12/11).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "sixcyl/error.hpp"
#include "sixcyl/geometry.hpp"

namespace sixcyl {

enum class label : int { A = 0, B, C, D, E, F };

inline constexpr std::array<label, 6> all_labels{label::A, label::B, label::C,
                                                 label::D, label::E, label::F};

inline char to_char(label l) { return static_cast<char>('A' + static_cast<int>(l)); }

inline int index_of(label l) { return static_cast<int>(l); }

/// Placement data of one label in the family.
struct label_placement {
    int lat_sign;        ///< +1 for A,B,C; -1 for D,E,F
    int base_sixths;     ///< base longitude in units of pi/6
    int kappa_sense;     ///< +1 for A,B,C; -1 for D,E,F
};

inline constexpr std::array<label_placement, 6> placements{{
    {+1, 1, +1}, {+1, 5, +1}, {+1, 9, +1},
    {-1, 3, -1}, {-1, 7, -1}, {-1, 11, -1},
}};

/**
 * Line J of the family with its own (phi, delta, kappa) parameters.  The
 * perturbation chart uses this with per-line parameters.
 */
template <typename Real>
tangent_line<Real> place_line(label j, const Real& phi, const Real& delta, const Real& kappa) {
    const label_placement& pl = placements[static_cast<std::size_t>(index_of(j))];
    const Real k0 = Real(pl.base_sixths) * pi<Real>() / 6;
    tangent_line<Real> l{Real(pl.lat_sign) * phi, k0 + Real(pl.kappa_sense) * kappa, delta};
    return l.normalized();
}

template <typename Real = double>
struct configuration {
    std::array<tangent_line<Real>, 6> lines{};

    const tangent_line<Real>& operator[](label l) const { return lines[static_cast<std::size_t>(index_of(l))]; }
    tangent_line<Real>& operator[](label l) { return lines[static_cast<std::size_t>(index_of(l))]; }
};

/**
 * The configuration C6(phi, delta, kappa).
 *
 * @throws error(errc::polar_degeneracy) when |phi| >= pi/2.
 */
template <typename Real>
configuration<Real> build_c6(const Real& phi, const Real& delta, const Real& kappa) {
    using std::abs;
    if (!(abs(phi) < pi<Real>() / 2)) throw error(errc::polar_degeneracy);
    configuration<Real> cfg;
    for (label j : all_labels) cfg[j] = place_line(j, phi, delta, kappa);
    return cfg;
}

// ---------------------------------------------------------------------------
// Pairs and symmetry classes
// ---------------------------------------------------------------------------

struct line_pair {
    label first;
    label second;

    std::string name() const { return {to_char(first), to_char(second)}; }
    friend bool operator==(const line_pair&, const line_pair&) = default;
};

/// D3 orbits of line pairs.
enum class pair_class { six_plet, ad_triplet, af_triplet, ae_triplet };

inline const char* to_string(pair_class c) {
    switch (c) {
    case pair_class::six_plet: return "AB-six-plet";
    case pair_class::ad_triplet: return "AD-triplet";
    case pair_class::af_triplet: return "AF-triplet";
    case pair_class::ae_triplet: return "AE-triplet";
    }
    return "?";
}

inline pair_class class_of(line_pair p) {
    const int a = index_of(p.first), b = index_of(p.second);
    const bool upper_a = a < 3, upper_b = b < 3;
    if (upper_a == upper_b) return pair_class::six_plet;
    // Opposite hemispheres: classify by the base-longitude gap in units of pi/6.
    const int gap = std::abs(placements[static_cast<std::size_t>(a)].base_sixths -
                             placements[static_cast<std::size_t>(b)].base_sixths);
    const int g = std::min(gap, 12 - gap);
    if (g == 6) return pair_class::ae_triplet;
    // A(1)-D(3) and A(1)-F(11) both differ by 2 sixths; distinguish by orbit.
    // {AD, BE, CF}: the lower line lies counterclockwise of the upper one.
    const int up = upper_a ? a : b, lo = upper_a ? b : a;
    const int diff = (placements[static_cast<std::size_t>(lo)].base_sixths -
                      placements[static_cast<std::size_t>(up)].base_sixths + 12) % 12;
    return diff == 2 ? pair_class::ad_triplet : pair_class::af_triplet;
}

inline line_pair make_pair(char a, char b) {
    return {static_cast<label>(a - 'A'), static_cast<label>(b - 'A')};
}

/// All fifteen pairs in lexicographic label order.
inline const std::array<line_pair, 15>& all_pairs() {
    static const std::array<line_pair, 15> pairs = [] {
        std::array<line_pair, 15> out{};
        std::size_t k = 0;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) out[k++] = {static_cast<label>(i), static_cast<label>(j)};
        return out;
    }();
    return pairs;
}

/**
 * The twelve relevant pairs in the order used for the dependency vector:
 * six-plet AB, BC, CA, DE, EF, FD; then AF, CE, BD; then CF, BE, AD.
 */
inline const std::array<line_pair, 12>& relevant_pairs() {
    static const std::array<line_pair, 12> pairs{
        make_pair('A', 'B'), make_pair('B', 'C'), make_pair('C', 'A'), make_pair('D', 'E'),
        make_pair('E', 'F'), make_pair('F', 'D'), make_pair('A', 'F'), make_pair('C', 'E'),
        make_pair('B', 'D'), make_pair('C', 'F'), make_pair('B', 'E'), make_pair('A', 'D')};
    return pairs;
}

template <typename Real>
Real pair_distance_sq(const configuration<Real>& cfg, line_pair p) {
    return distance_sq(cfg[p.first], cfg[p.second]);
}

struct pair_distance {
    line_pair pair;
    pair_class cls;
    double d2;  ///< squared distance

    double d() const { return std::sqrt(d2); }
};

/// Fifteen labeled squared distances with their class tags.
struct distance_report {
    std::array<pair_distance, 15> entries{};

    double d2(line_pair p) const {
        for (const auto& e : entries)
            if ((e.pair.first == p.first && e.pair.second == p.second) ||
                (e.pair.first == p.second && e.pair.second == p.first))
                return e.d2;
        throw error(errc::invalid_argument, "unknown pair");
    }

    /// Largest minus smallest squared distance within a class.
    double spread(pair_class c) const {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& e : entries)
            if (e.cls == c) {
                lo = std::min(lo, e.d2);
                hi = std::max(hi, e.d2);
            }
        return hi - lo;
    }

    double min_d2() const {
        double m = INFINITY;
        for (const auto& e : entries) m = std::min(m, e.d2);
        return m;
    }
};

inline distance_report pairwise(const configuration<double>& cfg) {
    distance_report r;
    std::size_t k = 0;
    for (const line_pair& p : all_pairs()) r.entries[k++] = {p, class_of(p), pair_distance_sq(cfg, p)};
    return r;
}

/// The functional D: minimum of the fifteen pairwise distances.
inline double min_distance(const configuration<double>& cfg) { return std::sqrt(pairwise(cfg).min_d2()); }

// ---------------------------------------------------------------------------
// The extremal curve
// ---------------------------------------------------------------------------

/// Angles of the curve at parameter x (generic scalar, no range check).
template <typename Real>
struct curve_angles {
    Real phi, delta, kappa, S, T;
};

template <typename Real>
curve_angles<Real> curve_angles_at(const Real& x) {
    using std::asin;
    using std::atan;
    using std::sqrt;
    const Real w = 1 + 7 * x + 4 * x * x;
    const Real S = 2 * sqrt(x * (1 - x) * (1 + x) / w);
    const Real T = sqrt((1 - x) * (1 + 3 * x) / (x * w));
    const Real kappa = atan((x - 1) / sqrt((1 + x) * (1 + 3 * x)));
    return {asin(S), atan(T), kappa, S, T};
}

struct curve_point {
    double x;
    double phi;
    double delta;
    double kappa;
    double S;  ///< sin phi
    double T;  ///< tan delta

    configuration<double> config() const { return build_c6(phi, delta, kappa); }
};

/**
 * Point of the extremal curve at parameter x in (0, 1]; x = 1 is C6 and
 * x = 1/2 the record point.
 *
 * @throws error(errc::parameter_out_of_range) for x <= 0 or x > 1.
 */
inline curve_point make_curve_point(double x) {
    if (!(x > 0.0) || !(x <= 1.0)) throw error(errc::parameter_out_of_range, "x must lie in (0, 1]");
    const auto a = curve_angles_at(x);
    return {x, a.phi, a.delta, a.kappa, a.S, a.T};
}

/// Common squared distance of the twelve relevant pairs along the curve.
inline double curve_common_d2(double x) { return 12.0 * x / (1.0 + 7.0 * x + 4.0 * x * x); }

struct record_constants {
    static constexpr double x_m = 0.5;
    static double phi_m() { return std::asin(std::sqrt(3.0 / 11.0)); }
    static double kappa_m() { return -std::atan(1.0 / std::sqrt(15.0)); }
    static double delta_m() { return std::atan(std::sqrt(5.0 / 11.0)); }
    static double D_m() { return std::sqrt(12.0 / 11.0); }
    static double r_m() { return (3.0 + std::sqrt(33.0)) / 8.0; }
};

// ---------------------------------------------------------------------------
// D3 action
// ---------------------------------------------------------------------------

/**
 * Element R_z^(120 k) o H of D3, where H is either the identity or the
 * half-turn about the x-axis (equatorial axis at longitude 0).
 *
 * The relabeling (A,D)(B,F)(C,E) is the half-turn about the equatorial axis
 * at longitude pi/3, i.e. {rotation = 1, flip = true}.
 */
struct d3_element {
    int rotation = 0;  ///< number of 120-degree turns about z, 0..2
    bool flip = false; ///< precede by the half-turn about the x-axis

    static d3_element identity() { return {0, false}; }
    static d3_element rot120() { return {1, false}; }
    static d3_element half_turn_x() { return {0, true}; }
    static d3_element half_turn_rho() { return {1, true}; }
};

/// Rotation matrix of a D3 element (row-major).
inline std::array<vec3<double>, 3> d3_matrix(d3_element g) {
    const double a = 2.0 * pi<double>() / 3.0 * g.rotation;
    const double c = std::cos(a), s = std::sin(a);
    const double f = g.flip ? -1.0 : 1.0;
    // R_z(a) * diag(1, f, f)
    return {vec3<double>{c, -s * f, 0.0}, vec3<double>{s, c * f, 0.0}, vec3<double>{0.0, 0.0, f}};
}

/**
 * Relabeling induced by a D3 element: the image of line J coincides with
 * the original line perm[J].
 */
inline std::array<label, 6> d3_relabeling(d3_element g) {
    // R_z^120: A->B->C->A, D->E->F->D.  H_x: A<->F, B<->E, C<->D.
    const std::array<int, 6> rot{1, 2, 0, 4, 5, 3};
    const std::array<int, 6> hx{5, 4, 3, 2, 1, 0};
    std::array<label, 6> out{};
    for (int j = 0; j < 6; ++j) {
        int k = g.flip ? hx[static_cast<std::size_t>(j)] : j;
        for (int r = 0; r < ((g.rotation % 3) + 3) % 3; ++r) k = rot[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(j)] = static_cast<label>(k);
    }
    return out;
}

/// Angles of the tangent line with the given frame.
inline tangent_line<double> line_from_frame(const line_frame<double>& f) {
    const double phi = std::asin(std::clamp(f.point[2], -1.0, 1.0));
    const double kappa = std::atan2(f.point[1], f.point[0]);
    const vec3<double> up = north_tangent(phi, kappa);
    const vec3<double> side = cross(f.point, up);
    const double delta = std::atan2(dot(f.direction, side), dot(f.direction, up));
    return tangent_line<double>{phi, kappa, delta}.normalized();
}

/// Rotate every line of a configuration by a D3 element (labels kept).
inline configuration<double> apply_d3(const configuration<double>& cfg, d3_element g) {
    const auto m = d3_matrix(g);
    auto rot = [&](const vec3<double>& v) { return vec3<double>{dot(m[0], v), dot(m[1], v), dot(m[2], v)}; };
    configuration<double> out;
    for (label j : all_labels) {
        const line_frame<double> f = frame_of(cfg[j]);
        out[j] = line_from_frame({rot(f.point), rot(f.direction)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curve polynomials
// ---------------------------------------------------------------------------

/// The plane curve polynomial Psi(S, T) carrying the extremal curve.
template <typename Real>
Real psi_residual(const Real& S, const Real& T) {
    const Real s = S * S, t = T * T;
    return 4 * s - 8 * t - 3 * s * s + 29 * s * t - 4 * t * t - 22 * s * s * t + 14 * s * t * t +
           4 * s * s * s * t - 7 * s * s * t * t + s * t * t * t;
}

/**
 * Psi at the curve point with parameter x, evaluated in long double from
 * long double (S, T): for small x the terms reach 1e5 and cancel, so a
 * double evaluation carries roundoff near 1e-11.
 */
inline double curve_psi_residual(double x) {
    const auto a = curve_angles_at(static_cast<long double>(x));
    return static_cast<double>(psi_residual(a.S, a.T));
}

/// The same polynomial in s = S^2, t = T^2.
inline double psi_st(double s, double t) {
    return 4 * s - 8 * t - 3 * s * s + 29 * s * t - 4 * t * t - 22 * s * s * t + 14 * s * t * t +
           4 * s * s * s * t - 7 * s * s * t * t + s * t * t * t;
}

} // namespace sixcyl

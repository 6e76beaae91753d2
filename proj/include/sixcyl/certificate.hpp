#pragma once

/**
 * @file certificate.hpp
 * @brief Sufficient-condition certifier for a sharp local maximum of
 *        F = min(F_1, ..., F_m) at a point where all F_u vanish.
 *
 * Condition (A): the m differentials span an (m-1)-dimensional space and
 * their unique linear dependency lambda has strictly positive entries.
 * Condition (B): sum_u lambda_u Hess(F_u), restricted to the common null
 * space E of the differentials, is negative definite.
 *
 * Both conditions are checked numerically: SVD rank with a relative
 * threshold, finite-difference Hessians, and a symmetric eigen-solve.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sixcyl/calculus.hpp"
#include "sixcyl/configuration.hpp"
#include "sixcyl/error.hpp"

namespace sixcyl {

/// m smooth maps on an n-dimensional chart, all vanishing at the origin.
struct min_problem {
    std::size_t dim = 0;
    std::vector<smooth_map> maps;
    std::vector<std::string> labels;

    double value(const coords& c) const {
        double m = INFINITY;
        for (const auto& f : maps) m = std::min(m, f(c));
        return m;
    }

    smooth_map as_min() const { return min_of(maps); }
};

enum class verdict { certified_sharp_max, failed_a, failed_b };

inline const char* to_string(verdict v) {
    switch (v) {
    case verdict::certified_sharp_max: return "CERTIFIED_SHARP_MAX";
    case verdict::failed_a: return "FAILED_A";
    case verdict::failed_b: return "FAILED_B";
    }
    return "?";
}

inline constexpr double rank_threshold = 1e-8;

struct relation_result {
    std::size_t rank = 0;
    Eigen::VectorXd singular_values;
    Eigen::VectorXd lambda;  ///< empty unless rank = m - 1
    bool convex = false;
    std::string failure;     ///< empty on success
};

namespace detail {

/// Scale lambda so its first entry is 1; fall back to unit norm with a
/// positive largest-magnitude entry when the first entry vanishes.
inline Eigen::VectorXd normalize_lambda(Eigen::VectorXd v) {
    if (std::abs(v(0)) > 1e-12 * v.norm()) return v / v(0);
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    return v / (v.norm() * (v(k) > 0 ? 1.0 : -1.0));
}

inline std::size_t numerical_rank(const Eigen::VectorXd& sv) {
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_threshold * sv(0)) ++r;
    return r;
}

} // namespace detail

/**
 * Rank of the m x n gradient matrix and its left-null dependency.
 *
 * @throws error(errc::invalid_argument) when m > n.
 */
inline relation_result relation(const Eigen::MatrixXd& gradients) {
    const Eigen::Index m = gradients.rows();
    if (m > gradients.cols() || m == 0) throw error(errc::invalid_argument, "relation needs 0 < m <= n");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gradients, Eigen::ComputeFullU);
    relation_result r;
    r.singular_values = svd.singularValues();
    r.rank = detail::numerical_rank(r.singular_values);
    if (r.rank + 1 != static_cast<std::size_t>(m)) {
        r.failure = "rank deficit ≠ 1";
        return r;
    }
    r.lambda = detail::normalize_lambda(svd.matrixU().col(m - 1));
    r.convex = (r.lambda.array() > 0.0).all();
    if (!r.convex) r.failure = "dependency not convex";
    return r;
}

/// Orthonormal basis (columns) of the common null space of the rows.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& gradients) {
    const Eigen::Index n = gradients.cols();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gradients, Eigen::ComputeFullV);
    const std::size_t r = detail::numerical_rank(svd.singularValues());
    return svd.matrixV().rightCols(n - static_cast<Eigen::Index>(r));
}

/// B^T (sum_u lambda_u H_u) B.
inline Eigen::MatrixXd restricted_form(const Eigen::VectorXd& lambda, const std::vector<Eigen::MatrixXd>& hessians,
                                       const Eigen::MatrixXd& basis) {
    if (hessians.size() != static_cast<std::size_t>(lambda.size()))
        throw error(errc::invalid_argument, "lambda and hessians disagree in length");
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.rows(), basis.rows());
    for (std::size_t u = 0; u < hessians.size(); ++u) h += lambda(static_cast<Eigen::Index>(u)) * hessians[u];
    Eigen::MatrixXd q = basis.transpose() * h * basis;
    return 0.5 * (q + q.transpose());
}

struct certificate_margins {
    double min_lambda = 0.0;
    double max_eigenvalue = 0.0;
    double sv_gap = 0.0;  ///< sigma_rank / sigma_(rank+1); infinite when nothing was cut
};

struct certificate {
    Eigen::MatrixXd gradients;
    Eigen::VectorXd singular_values;
    std::size_t rank = 0;
    Eigen::VectorXd lambda;
    Eigen::MatrixXd e_basis;
    Eigen::MatrixXd combined_hessian;  ///< sum_u lambda_u H_u on the full chart
    Eigen::MatrixXd restricted_form;
    Eigen::VectorXd eigenvalues;
    verdict result = verdict::failed_a;
    std::string reason;
    certificate_margins margins;
};

inline constexpr double locus_tolerance = 1e-10;

inline Eigen::MatrixXd to_eigen(const sym_matrix& h) {
    Eigen::MatrixXd m(h.n, h.n);
    for (std::size_t i = 0; i < h.n; ++i)
        for (std::size_t j = 0; j < h.n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(i, j);
    return m;
}

/// Gradient matrix (one row per map) at a point.
inline Eigen::MatrixXd gradient_matrix(const min_problem& problem, const coords& at) {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(problem.maps.size()), static_cast<Eigen::Index>(problem.dim));
    for (std::size_t u = 0; u < problem.maps.size(); ++u) {
        const auto row = gradient(problem.maps[u], at);
        for (std::size_t i = 0; i < row.size(); ++i)
            g(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) = row[i];
    }
    return g;
}

/**
 * Runs gradient -> relation -> null space -> Hessians -> restricted form ->
 * eigen test.
 *
 * @throws error(errc::not_on_locus) when the map values at `at` differ by
 *         more than 1e-10.
 */
inline certificate certify(const min_problem& problem, const coords& at) {
    if (at.size() != problem.dim) throw error(errc::invalid_argument, "point has wrong dimension");
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& f : problem.maps) {
        const double v = f(at);
        if (!std::isfinite(v)) throw error(errc::nonfinite_evaluation);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo > locus_tolerance) throw error(errc::not_on_locus);

    certificate c;
    c.gradients = gradient_matrix(problem, at);
    const relation_result rel = relation(c.gradients);
    c.singular_values = rel.singular_values;
    c.rank = rel.rank;
    c.margins.sv_gap = (rel.rank > 0 && rel.rank < static_cast<std::size_t>(rel.singular_values.size()))
                           ? rel.singular_values(static_cast<Eigen::Index>(rel.rank) - 1) /
                                 rel.singular_values(static_cast<Eigen::Index>(rel.rank))
                           : std::numeric_limits<double>::infinity();
    if (!rel.failure.empty() && rel.lambda.size() == 0) {
        c.result = verdict::failed_a;
        c.reason = rel.failure;
        return c;
    }
    c.lambda = rel.lambda;
    c.margins.min_lambda = rel.lambda.minCoeff();
    if (!rel.convex) {
        c.result = verdict::failed_a;
        c.reason = rel.failure;
        return c;
    }

    c.e_basis = null_space(c.gradients);
    std::vector<Eigen::MatrixXd> hs;
    hs.reserve(problem.maps.size());
    for (const auto& f : problem.maps) hs.push_back(to_eigen(hessian(f, at)));
    c.combined_hessian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(problem.dim),
                                               static_cast<Eigen::Index>(problem.dim));
    for (std::size_t u = 0; u < hs.size(); ++u) c.combined_hessian += c.lambda(static_cast<Eigen::Index>(u)) * hs[u];
    c.restricted_form = restricted_form(c.lambda, hs, c.e_basis);
    if (c.restricted_form.size() == 0) {
        c.eigenvalues.resize(0);
        c.margins.max_eigenvalue = -std::numeric_limits<double>::infinity();
        c.result = verdict::certified_sharp_max;
        return c;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.restricted_form, Eigen::EigenvaluesOnly);
    c.eigenvalues = eig.eigenvalues();
    c.margins.max_eigenvalue = c.eigenvalues.maxCoeff();
    if (c.margins.max_eigenvalue < 0.0) {
        c.result = verdict::certified_sharp_max;
    } else {
        c.result = verdict::failed_b;
        c.reason = "restricted form not negative definite";
    }
    return c;
}

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

/// The twelve relevant squared-distance maps on a chart.
inline min_problem curve_problem(const perturbation_chart<double>& chart) {
    min_problem p;
    p.dim = chart_dim;
    for (const line_pair& pr : relevant_pairs()) {
        p.maps.push_back(pair_map(chart, pr));
        p.labels.push_back(pr.name());
    }
    return p;
}

/// The twelve maps at the record point in the record chart.
inline min_problem record_problem() { return curve_problem(perturbation_chart<double>::record()); }

/// u1 = -y + 3 x^2, u2 = y - x^2: a convex dependency but no local maximum.
inline min_problem toy_problem() {
    min_problem p;
    p.dim = 2;
    p.maps.push_back([](const coords& c) { return -c[1] + 3.0 * c[0] * c[0]; });
    p.maps.push_back([](const coords& c) { return c[1] - c[0] * c[0]; });
    p.labels = {"u1", "u2"};
    return p;
}

/**
 * Restricted form re-expressed in the free coordinates (E_kappa, E_phi,
 * B_delta, C_delta) of the record chart, with lambda scaled so the six-plet
 * entries equal 10: 1/2 W^T (sum lambda H) W, where the columns of W solve
 * the linear constraints for the other eleven coordinates.
 */
inline Eigen::Matrix4d free_coordinates_form(const certificate& cert) {
    if (cert.combined_hessian.rows() != static_cast<Eigen::Index>(chart_dim) || cert.lambda.size() != 12)
        throw error(errc::invalid_argument, "needs a completed record certificate");
    const std::array<std::size_t, 4> free_idx{chart_index(label::E, angle::kappa), chart_index(label::E, angle::phi),
                                              chart_index(label::B, angle::delta),
                                              chart_index(label::C, angle::delta)};
    std::vector<Eigen::Index> dep;
    for (std::size_t i = 0; i < chart_dim; ++i)
        if (std::find(free_idx.begin(), free_idx.end(), i) == free_idx.end()) dep.push_back(static_cast<Eigen::Index>(i));
    const Eigen::MatrixXd& g = cert.gradients;
    Eigen::MatrixXd gd(g.rows(), static_cast<Eigen::Index>(dep.size()));
    for (std::size_t k = 0; k < dep.size(); ++k) gd.col(static_cast<Eigen::Index>(k)) = g.col(dep[k]);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(chart_dim), 4);
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gd);
    for (Eigen::Index k = 0; k < 4; ++k) {
        const auto fi = static_cast<Eigen::Index>(free_idx[static_cast<std::size_t>(k)]);
        const Eigen::VectorXd y = cod.solve(-g.col(fi));
        w(fi, k) = 1.0;
        for (std::size_t j = 0; j < dep.size(); ++j) w(dep[j], k) = y(static_cast<Eigen::Index>(j));
    }
    const double scale = 10.0 / cert.lambda(0);
    Eigen::Matrix4d phi = 0.5 * scale * (w.transpose() * cert.combined_hessian * w);
    return 0.5 * (phi + phi.transpose());
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Unit direction number `index` of the stream keyed by `seed`.
inline coords sample_direction(std::uint64_t seed, std::uint64_t index, std::size_t dim) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal;
    coords v(dim);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& c : v) {
            c = normal(gen);
            n2 += c * c;
        }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (double& c : v) c *= inv;
    return v;
}

struct sample_statistics {
    std::size_t samples = 0;
    std::vector<double> t_values;
    double max_D = 0.0;             ///< largest D(embed(t dir)) seen
    double threshold = 0.0;         ///< sqrt(12/11)
    std::size_t violations = 0;     ///< evaluations with D >= threshold
    std::uint64_t seed = 0;
};

/**
 * Samples D(embed(t dir)) at the record point over seeded unit directions.
 * Direction k depends only on (seed, k), never on evaluation order.
 */
inline sample_statistics perturb_sample(std::size_t n_samples, const std::vector<double>& t_values,
                                        std::uint64_t seed) {
    const auto chart = perturbation_chart<double>::record();
    sample_statistics s;
    s.samples = n_samples;
    s.t_values = t_values;
    s.seed = seed;
    s.threshold = record_constants::D_m();
    s.max_D = 0.0;
    coords c(chart_dim);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const coords dir = sample_direction(seed, k, chart_dim);
        for (double t : t_values) {
            for (std::size_t i = 0; i < chart_dim; ++i) c[i] = t * dir[i];
            const double d = min_distance(chart.embed(c));
            s.max_D = std::max(s.max_D, d);
            if (!(d < s.threshold)) ++s.violations;
        }
    }
    return s;
}

/// Values of a problem's min along the curve t -> path(t).
inline std::vector<double> sample_along(const min_problem& problem, const std::function<coords(double)>& path,
                                        const std::vector<double>& ts) {
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) out.push_back(problem.value(path(t)));
    return out;
}

} // namespace sixcyl

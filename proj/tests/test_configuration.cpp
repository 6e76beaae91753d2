/**
 * @file test_configuration.cpp
 * @brief Labelled six-line configurations, pair classes, the extremal curve
 *        and its D3 symmetry.
 */

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "sixcyl/configuration.hpp"

namespace {

using namespace sixcyl;

bool same_line(const tangent_line<double>& a, const tangent_line<double>& b, double tol) {
    const auto fa = frame_of(a), fb = frame_of(b);
    const double dp = norm(fa.point - fb.point);
    const double dd = std::min(norm(fa.direction - fb.direction), norm(fa.direction + fb.direction));
    return dp < tol && dd < tol;
}

TEST(Configuration, PairClassesPartitionTheFifteenPairs) {
    std::map<pair_class, int> count;
    for (const line_pair& p : all_pairs()) ++count[class_of(p)];
    EXPECT_EQ(count[pair_class::six_plet], 6);
    EXPECT_EQ(count[pair_class::ad_triplet], 3);
    EXPECT_EQ(count[pair_class::af_triplet], 3);
    EXPECT_EQ(count[pair_class::ae_triplet], 3);
    EXPECT_EQ(class_of(make_pair('A', 'D')), pair_class::ad_triplet);
    EXPECT_EQ(class_of(make_pair('C', 'F')), pair_class::ad_triplet);
    EXPECT_EQ(class_of(make_pair('B', 'D')), pair_class::af_triplet);
    EXPECT_EQ(class_of(make_pair('E', 'A')), pair_class::ae_triplet);
}

TEST(Configuration, RelevantPairsOrder) {
    std::vector<std::string> names;
    for (const line_pair& p : relevant_pairs()) names.push_back(p.name());
    EXPECT_EQ(names, (std::vector<std::string>{"AB", "BC", "CA", "DE", "EF", "FD", "AF", "CE", "BD", "CF", "BE",
                                               "AD"}));
}

TEST(Configuration, C6DistancesAreEquatorialChords) {
    // At phi = delta = kappa = 0 the lines are vertical at longitudes
    // 30, 150, 270 (A, B, C) and 90, 210, 330 (D, E, F) degrees.
    const distance_report r = pairwise(build_c6(0.0, 0.0, 0.0));
    EXPECT_NEAR(r.d2(make_pair('A', 'B')), 3.0, 1e-14);
    EXPECT_NEAR(r.d2(make_pair('A', 'D')), 1.0, 1e-14);
    EXPECT_NEAR(r.d2(make_pair('A', 'F')), 1.0, 1e-14);
    EXPECT_NEAR(r.d2(make_pair('A', 'E')), 4.0, 1e-14);
    for (pair_class c : {pair_class::six_plet, pair_class::ad_triplet, pair_class::af_triplet,
                         pair_class::ae_triplet})
        EXPECT_LT(r.spread(c), 1e-14);
    EXPECT_NEAR(min_distance(build_c6(0.0, 0.0, 0.0)), 1.0, 1e-14);
}

TEST(Configuration, PolarLatitudeIsRejected) {
    try {
        build_c6(M_PI / 2.0, 0.1, 0.0);
        FAIL() << "expected polar_degeneracy";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::polar_degeneracy);
    }
}

TEST(Configuration, RecordPointConstants) {
    const curve_point cp = make_curve_point(0.5);
    EXPECT_NEAR(cp.phi, record_constants::phi_m(), 1e-15);
    EXPECT_NEAR(cp.kappa, record_constants::kappa_m(), 1e-15);
    EXPECT_NEAR(cp.delta, record_constants::delta_m(), 1e-15);
    EXPECT_NEAR(std::sin(cp.phi), std::sqrt(3.0 / 11.0), 1e-15);
    EXPECT_NEAR(std::tan(cp.delta), std::sqrt(5.0 / 11.0), 1e-15);
    EXPECT_NEAR(std::tan(cp.kappa), -1.0 / std::sqrt(15.0), 1e-15);
    EXPECT_NEAR(min_distance(cp.config()), std::sqrt(12.0 / 11.0), 1e-12);
}

TEST(Configuration, TwelveRelevantDistancesFollowTheCurveLaw) {
    for (int i = 1; i < 100; ++i) {
        const double x = i / 100.0;
        const distance_report r = pairwise(make_curve_point(x).config());
        for (const line_pair& p : relevant_pairs()) EXPECT_NEAR(r.d2(p), curve_common_d2(x), 1e-12) << x;
        // The slack triplet stays strictly farther apart.
        EXPECT_GT(r.d2(make_pair('A', 'E')), curve_common_d2(x) + 1e-3) << x;
    }
}

TEST(Configuration, CurveApproachesOneBelowParallelism) {
    // The skew six-plet distance tends to 1 as x -> 1 from below, while the
    // parallel configuration at x = 1 has six-plet chord sqrt(3).
    const double near = pairwise(make_curve_point(1.0 - 1e-6).config()).d2(make_pair('A', 'B'));
    EXPECT_NEAR(near, 1.0, 1e-5);
    EXPECT_NEAR(pairwise(make_curve_point(1.0).config()).d2(make_pair('A', 'B')), 3.0, 1e-12);
}

TEST(Configuration, CurvePointRange) {
    for (double bad : {0.0, -0.5, 1.0000001, std::nan("")}) {
        try {
            make_curve_point(bad);
            FAIL() << bad;
        } catch (const error& e) {
            EXPECT_EQ(e.code(), errc::parameter_out_of_range);
        }
    }
    EXPECT_NO_THROW(make_curve_point(1.0));
}

TEST(Configuration, CurveSatisfiesPsi) {
    for (int i = 1; i <= 100; ++i) {
        const double x = i / 100.0;
        EXPECT_LT(std::abs(curve_psi_residual(x)), 1e-12) << x;
    }
}

TEST(Configuration, PsiTriplePointIsSingular) {
    // Psi(s, t) at (1, -1): value and both partials vanish.
    EXPECT_DOUBLE_EQ(psi_st(1.0, -1.0), 0.0);
    const double h = 1e-6;
    EXPECT_NEAR((psi_st(1.0 + h, -1.0) - psi_st(1.0 - h, -1.0)) / (2 * h), 0.0, 1e-8);
    EXPECT_NEAR((psi_st(1.0, -1.0 + h) - psi_st(1.0, -1.0 - h)) / (2 * h), 0.0, 1e-8);
}

TEST(Configuration, D3RelabelingsFormAGroupOfSixPermutations) {
    std::set<std::array<label, 6>> perms;
    for (int r = 0; r < 3; ++r)
        for (bool f : {false, true}) perms.insert(d3_relabeling({r, f}));
    EXPECT_EQ(perms.size(), 6u);
    const auto rho = d3_relabeling(d3_element::half_turn_rho());
    EXPECT_EQ(rho[0], label::D);
    EXPECT_EQ(rho[1], label::F);
    EXPECT_EQ(rho[2], label::E);
}

TEST(Configuration, D3MapsEveryFamilyMemberToItself) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int k = 0; k < 20; ++k) {
        const configuration<double> cfg = build_c6(u(gen), u(gen), u(gen));
        for (int r = 0; r < 3; ++r) {
            for (bool f : {false, true}) {
                const d3_element g{r, f};
                const auto img = apply_d3(cfg, g);
                const auto perm = d3_relabeling(g);
                for (label j : all_labels)
                    EXPECT_TRUE(same_line(img[j], cfg[perm[static_cast<std::size_t>(index_of(j))]], 1e-12))
                        << "r=" << r << " flip=" << f << " line " << to_char(j);
            }
        }
    }
}

TEST(Configuration, PairwiseDistancesAreD3Invariant) {
    const configuration<double> cfg = make_curve_point(0.37).config();
    const distance_report base = pairwise(cfg);
    const distance_report img = pairwise(apply_d3(cfg, d3_element::rot120()));
    for (const line_pair& p : all_pairs()) EXPECT_NEAR(img.d2(p), base.d2(p), 1e-12);
}

} // namespace

/**
 * @file test_galois.cpp
 * @brief Exact coefficient tables, the symmetry operators, the delta-only
 *        closed forms and field membership of Taylor coefficients.
 */

#include <cmath>
#include <map>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "sixcyl/galois.hpp"

#include "derived_tables.inc"

namespace {

using namespace sixcyl;

/// Tables rebuilt from the independently derived coefficient list.
std::map<std::pair<int, std::string>, coeff_table> derived_tables() {
    std::map<std::pair<int, std::string>, coeff_table> out;
    for (const derived_coefficient& c : derived_coefficients) {
        auto& t = out[{c.order, c.pair}];
        t.order = c.order;
        t.pair = make_pair(c.pair[0], c.pair[1]);
        t.add(c.i, c.j, quad_ext(parse_rational(c.a), parse_rational(c.b), 5));
    }
    return out;
}

std::string key(line_pair p) {
    std::string s = p.name();
    if (s[0] > s[1]) std::swap(s[0], s[1]);
    return s;
}

TEST(Galois, GoldenConstants) {
    using namespace golden;
    EXPECT_EQ(tau() * tau_bar(), quad_ext(-1));
    EXPECT_EQ(tau() + tau_bar(), quad_ext(1));
    EXPECT_NEAR(beta11().value(), 2.0 / 11.0 * (4.0 - std::sqrt(5.0)), 1e-15);
    EXPECT_EQ(beta11() * beta11_bar(), quad_ext(rational(4, 11)));
}

TEST(Galois, ReferenceTablesEqualDerivedTables) {
    const auto derived = derived_tables();
    int compared = 0;
    for (int order : {1, 2}) {
        for (const coeff_table& t : reference_tables(order)) {
            std::string name = key(t.pair);
            const auto it = derived.find({order, name});
            ASSERT_NE(it, derived.end()) << order << name;
            EXPECT_TRUE(t == it->second) << "order " << order << " pair " << name;
            ++compared;
        }
    }
    EXPECT_EQ(compared, 17);
}

TEST(Galois, PinnedFirstOrderForms) {
    // AF pinned: beta11 (tau^2 beta11, tau^3, 1) on (F_kappa, F_phi, F_delta).
    using namespace golden;
    const coeff_table af = reference_table(1, make_pair('A', 'F'))->pinned();
    const quad_ext tau2 = tau() * tau(), tau3 = tau2 * tau();
    EXPECT_EQ(af.at(coord(label::F, angle::kappa)), beta11() * tau2 * beta11());
    EXPECT_EQ(af.at(coord(label::F, angle::phi)), beta11() * tau3);
    EXPECT_EQ(af.at(coord(label::F, angle::delta)), beta11());
    EXPECT_EQ(af.coeffs.size(), 3u);
    // BF: (6/169) (2 sqrt5, 5, -sqrt5) pattern on the B and F slots.
    const coeff_table bf = *reference_table(1, make_pair('B', 'F'));
    const quad_ext s = quad_ext(rational(6, 169));
    EXPECT_EQ(bf.at(coord(label::B, angle::kappa)), s * quad_ext(0, 2, 5));
    EXPECT_EQ(bf.at(coord(label::B, angle::phi)), s * quad_ext(5));
    EXPECT_EQ(bf.at(coord(label::B, angle::delta)), s * quad_ext(0, -1, 5));
}

TEST(Galois, SecondOrderBcKappaSquare) {
    // (B_kappa - C_kappa)^2 carries (11/150)(1/32).
    const coeff_table bc = *reference_table(2, make_pair('B', 'C'));
    const int bk = coord(label::B, angle::kappa), ck = coord(label::C, angle::kappa);
    const quad_ext expect(rational(11, 150 * 32));
    EXPECT_EQ(bc.at(bk, bk), expect);
    EXPECT_EQ(bc.at(ck, ck), expect);
    EXPECT_EQ(bc.at(bk, ck), quad_ext(-2) * expect);
}

TEST(Galois, StatedBdKappaSquareIsAMisprint) {
    const coeff_table bd = *reference_table(2, make_pair('B', 'D'));
    const int bk = coord(label::B, angle::kappa);
    const quad_ext used = bd.at(bk, bk);
    EXPECT_EQ(used, quad_ext(rational(2957, 127776), rational(-1017, 127776), 5));
    EXPECT_FALSE(used == reference_bd_kappa_square());
    EXPECT_GT(std::abs(used.value() - reference_bd_kappa_square().value()), 1e-4);
}

TEST(Galois, SymmetryImagesOfTablesAreTables) {
    const auto derived = derived_tables();
    const std::vector<symmetry_op> gens{symmetry_op::varpi(), symmetry_op::rho(), symmetry_op::varsigma()};
    int checked = 0;
    for (const auto& [k, t] : derived) {
        for (const symmetry_op& g : gens) {
            const coeff_table img = apply_symmetry(g, t);
            const auto it = derived.find({k.first, key(img.pair)});
            if (it == derived.end()) continue;
            EXPECT_TRUE(img == it->second) << g.name << " on " << k.second << " order " << k.first;
            ++checked;
        }
    }
    EXPECT_GT(checked, 45);
}

TEST(Galois, VarsigmaSendsBdToCf) {
    for (int order : {1, 2}) {
        const coeff_table bd = *reference_table(order, make_pair('B', 'D'));
        const coeff_table cf = *reference_table(order, make_pair('C', 'F'));
        EXPECT_TRUE(apply_symmetry(symmetry_op::varsigma(), bd) == cf) << order;
        EXPECT_TRUE(apply_symmetry(symmetry_op::varsigma(), cf) == bd) << order;
    }
}

TEST(Galois, GroupStructure) {
    const symmetry_op rs = then(symmetry_op::rho(), symmetry_op::varsigma());
    EXPECT_TRUE(is_identity(power(rs, 6)));
    EXPECT_FALSE(is_identity(power(rs, 3)));
    EXPECT_FALSE(is_identity(power(rs, 2)));
    // rho then varsigma is the 6-cycle (A, F, C, E, B, D).
    const std::array<int, 6> expect{5, 3, 4, 0, 1, 2};
    EXPECT_EQ(rs.perm, expect);
    EXPECT_TRUE(then(then(rs, rs), then(rs, rs)) == power(rs, 4));
    EXPECT_TRUE(is_identity(power(symmetry_op::varpi(), 3)));
    EXPECT_TRUE(is_identity(power(symmetry_op::varsigma(), 2)));
    EXPECT_EQ(generate_group({symmetry_op::varpi(), symmetry_op::rho(), symmetry_op::varsigma()}).size(), 12u);
}

TEST(Galois, CurveAlgebraInvariants) {
    for (int q = 2; q <= 12; ++q) {
        for (int p = 1; p < q; ++p) {
            const curve_algebra ca(rational(p, q));
            EXPECT_TRUE((ca.gamma * ca.gamma_bar).is_rational());
            EXPECT_TRUE((ca.gamma + ca.gamma_bar).is_rational());
            EXPECT_EQ(ca.p * ca.p, quad_ext(ca.p2));
        }
    }
    const curve_algebra fifth(rational(1, 5));
    EXPECT_TRUE(fifth.p_rational());
    EXPECT_EQ(fifth.p, quad_ext(rational(4, 5)));
    EXPECT_THROW(curve_algebra(rational(1)), error);
    EXPECT_THROW(curve_algebra(rational(0)), error);
}

TEST(Galois, GammaIsTheCosineBetweenTangentDirections) {
    std::mt19937_64 gen(13);
    for (int k = 0; k < 20; ++k) {
        const int q = std::uniform_int_distribution<int>(3, 60)(gen);
        const int p = std::uniform_int_distribution<int>(1, q - 1)(gen);
        const rational x(p, q);
        const curve_algebra ca(x);
        const auto cfg = make_curve_point(static_cast<double>(x)).config();
        const auto a = frame_of(cfg[label::A]).direction;
        EXPECT_NEAR(std::abs(dot(a, frame_of(cfg[label::D]).direction)), std::abs(ca.gamma.value()), 1e-12);
        EXPECT_NEAR(std::abs(dot(a, frame_of(cfg[label::F]).direction)), std::abs(ca.gamma_bar.value()), 1e-12);
    }
}

double geometric_delta_d2(const rational& x, label j, double xi) {
    const curve_point cp = make_curve_point(static_cast<double>(x));
    return distance_sq(place_line(label::A, cp.phi, cp.delta, cp.kappa),
                       place_line(j, cp.phi, cp.delta + std::atan(xi), cp.kappa));
}

TEST(Galois, ClosedFormsAtTheRecordPoint) {
    EXPECT_NEAR(closed_form_AD(rational(1, 2), 0.0), 12.0 / 11.0, 1e-14);
    EXPECT_NEAR(closed_form_AF(rational(1, 2), 0.0), 12.0 / 11.0, 1e-14);
    EXPECT_NEAR(closed_form_AD(rational(1, 2), 0.01), geometric_delta_d2(rational(1, 2), label::D, 0.01), 1e-12);
    EXPECT_NEAR(closed_form_AF(rational(1, 2), 0.01), geometric_delta_d2(rational(1, 2), label::F, 0.01), 1e-12);
    const curve_algebra ca(rational(1, 2));
    EXPECT_EQ(closed_form_AD_exact(ca, rational(0)), quad_ext(rational(12, 11)));
}

TEST(Galois, ClosedFormsMatchGeometryOnRandomSamples) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> xi(-0.3, 0.3);
    for (int k = 0; k < 50; ++k) {
        const int q = std::uniform_int_distribution<int>(3, 40)(gen);
        const rational x(std::uniform_int_distribution<int>(1, q - 1)(gen), q);
        const double t = xi(gen);
        EXPECT_NEAR(closed_form_AD(x, t), geometric_delta_d2(x, label::D, t), 1e-12) << x << " " << t;
        EXPECT_NEAR(closed_form_AF(x, t), geometric_delta_d2(x, label::F, t), 1e-12) << x << " " << t;
    }
}

TEST(Galois, StatedAfFormDisagreesWithGeometry) {
    const double stated = closed_form_AF_reference(rational(1, 2), 0.1);
    EXPECT_GT(std::abs(stated - geometric_delta_d2(rational(1, 2), label::F, 0.1)), 1e-3);
}

TEST(Galois, AfIsAdWithNegatedXiAndP) {
    for (const rational& x : {rational(1, 2), rational(1, 3), rational(1, 5), rational(2, 7)}) {
        const curve_algebra ca(x);
        for (const rational& xi : {rational(1, 10), rational(-3, 7), rational(2, 5)}) {
            EXPECT_EQ(closed_form_AF_exact(ca, xi), closed_form_AD_exact(ca, -xi, -1)) << x << " " << xi;
            if (!ca.p_rational()) {
                EXPECT_EQ(closed_form_AF_exact(ca, xi), closed_form_AD_exact(ca, -xi).conjugate());
            }
        }
    }
}

TEST(Galois, ReconstructKnownValues) {
    auto r = reconstruct(golden::beta11().value(), 5, 100);
    ASSERT_TRUE(r);
    EXPECT_EQ(*r, golden::beta11());
    r = reconstruct(12.0 / 11.0, 5, 10000);
    ASSERT_TRUE(r);
    EXPECT_EQ(*r, quad_ext(rational(12, 11)));
    r = reconstruct(0.8, 1, 100);
    ASSERT_TRUE(r);
    EXPECT_EQ(*r, quad_ext(rational(4, 5)));
    EXPECT_FALSE(reconstruct(M_PI, 5, 100));
    EXPECT_FALSE(reconstruct(std::nan(""), 5, 100));
    EXPECT_THROW(reconstruct(1.0, 8, 100), error);
}

TEST(Galois, FieldAtOneHalf) {
    const field_report r = field_check(rational(1, 2));
    EXPECT_EQ(r.d, 5);
    EXPECT_EQ(r.field(), "Q[sqrt(5)]");
    EXPECT_TRUE(r.all_reconstructed);
    EXPECT_TRUE(r.swap_holds);
    ASSERT_EQ(r.coefficients.size(), 4u);
    EXPECT_EQ(*r.coefficients[0].exact, quad_ext(rational(12, 11)));
    EXPECT_EQ(*r.coefficients[1].exact, quad_ext(rational(-240, 121), rational(-60, 121), 5));
    for (const auto& c : r.coefficients) {
        EXPECT_LT(c.residual, 1e-9);
        EXPECT_LT(c.confirmation_residual, 1e-10);
    }
}

TEST(Galois, FieldAtOneThird) {
    const field_report r = field_check(rational(1, 3));
    EXPECT_EQ(r.field(), "Q[sqrt(2)]");
    EXPECT_TRUE(r.all_reconstructed);
    EXPECT_TRUE(r.swap_holds);
    EXPECT_EQ(*r.coefficients[0].exact, quad_ext(rational(18, 17)));
    EXPECT_EQ(*r.coefficients[1].exact, quad_ext(rational(-4000, 2601), rational(-200, 289), 2));
}

TEST(Galois, FieldAtOneFifthDegeneratesToRationals) {
    const field_report r = field_check(rational(1, 5));
    EXPECT_EQ(r.field(), "Q");
    EXPECT_TRUE(r.p_rational);
    EXPECT_EQ(r.note, "p_x rational");
    EXPECT_TRUE(r.all_reconstructed);
    EXPECT_EQ(*r.coefficients[0].exact, quad_ext(rational(15, 16)));
    EXPECT_EQ(*r.coefficients[1].exact, quad_ext(rational(-441, 250)));
}

TEST(Galois, SecondOrderAtOneHalf) {
    const field_report r = field_check(rational(1, 2), 2);
    EXPECT_TRUE(r.all_reconstructed);
    EXPECT_TRUE(r.swap_holds);
}

TEST(Galois, FieldCheckRejectsBadInput) {
    EXPECT_THROW(field_check(rational(1, 2), 3), error);
    EXPECT_THROW(field_check(rational(3, 2)), error);
}

} // namespace

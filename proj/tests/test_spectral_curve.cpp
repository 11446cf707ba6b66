#include "thetarec/spectral_curve.hpp"

#include <doctest.h>

using namespace thetarec;

namespace {

const ExtScalar kMinusIOverSqrt6 = ExtScalar::basis(7, Rational(-1, 6)); // -i/sqrt6
const ExtScalar kOneOverSqrt6 = ExtScalar::basis(3, Rational(1, 6));     // 1/sqrt6
const ExtScalar kOneOverSqrt2 = ExtScalar::basis(1, Rational(1, 2));     // 1/sqrt2

RatFunc double_pole_at(const ExtScalar& c, const ExtScalar& at) {
    Poly lin = Poly::linear_root(at);
    return RatFunc(Poly(c), lin * lin);
}

} // namespace

TEST_CASE("airy analysis") {
    AnalyzedCurve curve(SpectralCurve::airy(), 14);
    REQUIRE(curve.num_points() == 1);
    CHECK(curve.point(0).location == ExtScalar(0));
    CHECK(curve.point(0).value == ExtScalar(0));
    CHECK(curve.point(0).branch_s1 == ExtScalar(1));
    CHECK(!curve.point(0).irregular);
    // B(P, .) = dz/z^2 and the auxiliary family (2k+1)!! z^-(2k+2) dz.
    CHECK(curve.bergman_at_critical(0) == double_pole_at(ExtScalar(1), ExtScalar(0)));
    for (int k = 0; k <= 4; ++k) {
        Poly den(ExtScalar(1));
        for (int j = 0; j < 2 * k + 2; ++j) den = den * Poly::monomial(1);
        RatFunc expect(Poly(ExtScalar(double_factorial_odd(k + 1))), den);
        CHECK(curve.aux_differential(0, k) == expect);
        CHECK(curve.basis_form(0, k) == expect);
    }
}

TEST_CASE("bessel analysis flags the irregular point") {
    AnalyzedCurve curve(SpectralCurve::bessel(), 14);
    REQUIRE(curve.num_points() == 1);
    CHECK(curve.point(0).irregular);
    CHECK(curve.k_bound(0, 2, 1) == 1); // pole order 2g = 4
    CHECK(curve.k_bound(0, 1, 1) == 0);
}

TEST_CASE("a2 critical points and bergman evaluations") {
    AnalyzedCurve curve(SpectralCurve::a2(), 20);
    REQUIRE(curve.num_points() == 2);
    CHECK(curve.point(0).location == ExtScalar(-1));
    CHECK(curve.point(0).value == ExtScalar(2));
    CHECK(curve.point(1).location == ExtScalar(1));
    CHECK(curve.point(1).value == ExtScalar(-2));
    CHECK(!curve.point(0).irregular);
    CHECK(!curve.point(1).irregular);
    // default branches: s1 = i sqrt6 at z = -1, sqrt6 at z = +1
    CHECK(curve.point(0).branch_s1 == ExtScalar::basis(7));
    CHECK(curve.point(1).branch_s1 == ExtScalar::sqrt6());

    CHECK(curve.bergman_at_critical(0) == double_pole_at(kMinusIOverSqrt6, ExtScalar(-1)));
    CHECK(curve.bergman_at_critical(1) == double_pole_at(kOneOverSqrt6, ExtScalar(1)));
}

TEST_CASE("a2 frame expansions reproduce the Laplace fixture data") {
    AnalyzedCurve curve(SpectralCurve::a2(), 20);
    // B(P_1, t) = dt (t^-2 - 1/144 + 35/41472 t^2 + ... + odd)
    const LaurentSeries& own = curve.basis_expansion(0, 0, 0);
    CHECK(own.coeff(-2) == ExtScalar(1));
    CHECK(own.coeff(-1) == ExtScalar(0));
    CHECK(own.coeff(0) == ExtScalar(Rational(-1, 144)));
    CHECK(own.coeff(2) == ExtScalar(Rational(35, 41472)));
    // B(P_2, t) = dt (-i/24 + 35i/3456 t^2 + ...)
    const LaurentSeries& cross = curve.basis_expansion(0, 1, 0);
    CHECK(cross.coeff(0) == ExtScalar::basis(4, Rational(-1, 24)));
    CHECK(cross.coeff(2) == ExtScalar::basis(4, Rational(35, 3456)));
    // B(P_2, s) at its own point: s^-2 + 1/144 + 35/41472 s^2
    const LaurentSeries& own2 = curve.basis_expansion(1, 1, 0);
    CHECK(own2.coeff(0) == ExtScalar(Rational(1, 144)));
    CHECK(own2.coeff(2) == ExtScalar(Rational(35, 41472)));

    // dy = sqrt(-3) dz around P_1: (1/sqrt2 - 5/(144 sqrt2) t^2 + 385/(124416 sqrt2) t^4 + ...) dt
    LaurentSeries dy = curve.frame_y(0).derivative();
    CHECK(dy.coeff(0) == kOneOverSqrt2);
    CHECK(dy.coeff(2) == ExtScalar::basis(1, Rational(-5, 288)));      // -5/(144 sqrt2)
    CHECK(dy.coeff(4) == ExtScalar::basis(1, Rational(385, 248832))); // 385/(124416 sqrt2)
}

TEST_CASE("a2 auxiliary differential has a fourth order pole") {
    AnalyzedCurve curve(SpectralCurve::a2(), 20);
    RatFunc v11 = curve.aux_differential(0, 1);
    CHECK(v11.pole_order_at(ExtScalar(-1)) == 4);
    // The iterated derivative also acquires a pole at the other critical point,
    // unlike the principal-part basis family.
    CHECK(v11.pole_order_at(ExtScalar(1)) > 0);
    CHECK(curve.basis_form(0, 1).pole_order_at(ExtScalar(1)) == 0);
    CHECK(curve.basis_form(0, 1).pole_order_at(ExtScalar(-1)) == 4);
}

TEST_CASE("bgw-a2 is irregular with the shifted dy expansion") {
    AnalyzedCurve curve(SpectralCurve::bgw_a2(), 20);
    REQUIRE(curve.num_points() == 2);
    CHECK(curve.point(0).irregular);
    CHECK(curve.point(1).irregular);
    // dy around P_1: (-1/sqrt2 t^-2 - 5/(144 sqrt2) + 385/(41472 sqrt2) t^2 + ...) dt
    LaurentSeries dy = curve.frame_y(0).derivative();
    CHECK(dy.coeff(-2) == -kOneOverSqrt2);
    CHECK(dy.coeff(-1) == ExtScalar(0));
    CHECK(dy.coeff(0) == ExtScalar::basis(1, Rational(-5, 288)));
    CHECK(dy.coeff(2) == ExtScalar::basis(1, Rational(385, 82944))); // 385/(41472 sqrt2)
}

TEST_CASE("flat differentials and the change of basis") {
    AnalyzedCurve curve(SpectralCurve::a2(), 20);
    // xi^1_0 = dz/(1-z)^2 + dz/(1+z)^2, xi^2_0 = dz/(1-z)^2 - dz/(1+z)^2
    RatFunc xi1 = curve.flat_differential(1, 0);
    RatFunc xi2 = curve.flat_differential(2, 0);
    RatFunc plus = double_pole_at(ExtScalar(1), ExtScalar(-1));
    RatFunc minus = double_pole_at(ExtScalar(1), ExtScalar(1));
    CHECK(xi1 == plus + minus);
    CHECK(xi2 == minus - plus);

    auto c = curve.flat_to_basis_matrix();
    // xi^1_0 = sqrt6 (V^2_0 + i V^1_0)
    CHECK(c[0][0] == ExtScalar::basis(7)); // i sqrt6 on the z=-1 form
    CHECK(c[0][1] == ExtScalar::sqrt6());
    CHECK(c[1][0] == -ExtScalar::basis(7));
    CHECK(c[1][1] == ExtScalar::sqrt6());
    // and the linear relation holds exactly
    CHECK(xi1 == curve.bergman_at_critical(0) * c[0][0] + curve.bergman_at_critical(1) * c[0][1]);
}

TEST_CASE("y compatibility test") {
    CHECK(AnalyzedCurve(SpectralCurve::a2(), 12).check_y_compatibility());
    CHECK(AnalyzedCurve(SpectralCurve::bgw_a2(), 12).check_y_compatibility());
    CHECK(AnalyzedCurve(SpectralCurve::airy(), 12).check_y_compatibility());
    CHECK(AnalyzedCurve(SpectralCurve::bessel(), 12).check_y_compatibility());
    // y with a pole away from the critical points fails the residue identity.
    SpectralCurve bad;
    bad.x = SpectralCurve::a2().x;
    bad.y = RatFunc(Poly(ExtScalar(1)), Poly::linear_root(ExtScalar(2)));
    CHECK(!AnalyzedCurve(bad, 12).check_y_compatibility());
}

TEST_CASE("branch override validation") {
    SpectralCurve c = SpectralCurve::a2();
    c.branch_overrides.emplace_back(ExtScalar(-1), ExtScalar::basis(7, Rational(-1))); // -i sqrt6
    AnalyzedCurve curve(c, 16);
    CHECK(curve.point(0).branch_s1 == ExtScalar::basis(7, Rational(-1)));
    CHECK(curve.bergman_at_critical(0) == double_pole_at(-kMinusIOverSqrt6, ExtScalar(-1)));

    SpectralCurve wrong = SpectralCurve::a2();
    wrong.branch_overrides.emplace_back(ExtScalar(-1), ExtScalar(3));
    CHECK_THROWS(AnalyzedCurve(wrong, 16));
}

TEST_CASE("rejects non-simple ramification and bad y") {
    SpectralCurve c;
    c.x = RatFunc(Poly::monomial(3), Poly(ExtScalar(1))); // x = z^3, dx has a double zero
    c.y = RatFunc::variable();
    CHECK_THROWS(AnalyzedCurve(c, 12));

    SpectralCurve dbl;
    dbl.x = SpectralCurve::a2().x;
    Poly lin = Poly::linear_root(ExtScalar(1));
    dbl.y = RatFunc(Poly(ExtScalar(1)), lin * lin); // double pole of y at a critical point
    CHECK_THROWS(AnalyzedCurve(dbl, 12));
}

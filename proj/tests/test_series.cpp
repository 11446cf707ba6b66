#include "thetarec/laurent.hpp"

#include <doctest.h>
#include <random>

using namespace thetarec;

namespace {

LaurentSeries from_ints(std::initializer_list<int> coeffs, int lo, int order) {
    std::vector<ExtScalar> c;
    for (int x : coeffs) c.push_back(ExtScalar(x));
    return LaurentSeries(std::move(c), lo, order);
}

} // namespace

TEST_CASE("polynomial division and gcd") {
    // (z^2 - 1) = (z - 1)(z + 1)
    Poly p(std::vector<ExtScalar>{ExtScalar(-1), ExtScalar(0), ExtScalar(1)});
    Poly a = Poly::linear_root(ExtScalar(1));
    Poly q, r;
    Poly::divmod(p, a, q, r);
    CHECK(r.is_zero());
    CHECK(q == Poly::linear_root(ExtScalar(-1)));
    CHECK(Poly::gcd(p, a) == a.monic());

    auto roots = p.roots_in_K();
    CHECK(roots.size() == 2);
}

TEST_CASE("roots over the extension field") {
    // 3z^2 - 3 has roots +-1; z^2 + 6 needs i sqrt6.
    Poly p(std::vector<ExtScalar>{ExtScalar(6), ExtScalar(0), ExtScalar(1)});
    auto roots = p.roots_in_K();
    REQUIRE(roots.size() == 2);
    for (auto& [root, mult] : roots) {
        CHECK(mult == 1);
        CHECK((root * root + ExtScalar(6)).is_zero());
    }
    Poly q(std::vector<ExtScalar>{ExtScalar(5), ExtScalar(0), ExtScalar(1)});
    CHECK_THROWS(q.roots_in_K());
}

TEST_CASE("residues of rational differentials") {
    // f = 1/(z^2 - 1): residues +-1/2 at +-1, residue at infinity 0.
    RatFunc f(Poly(ExtScalar(1)),
              Poly(std::vector<ExtScalar>{ExtScalar(-1), ExtScalar(0), ExtScalar(1)}));
    CHECK(f.residue_at(ExtScalar(1)) == ExtScalar(Rational(1, 2)));
    CHECK(f.residue_at(ExtScalar(-1)) == ExtScalar(Rational(-1, 2)));
    CHECK(f.residue_at_infinity().is_zero());
    // z/(z^2-1): residue at infinity is -1.
    RatFunc zf = f * RatFunc::variable();
    CHECK(zf.residue_at_infinity() == ExtScalar(-1));
    // Higher-order pole with no simple part: constant/(z-2)^3.
    Poly lin = Poly::linear_root(ExtScalar(2));
    RatFunc g(Poly(ExtScalar(7)), lin * lin * lin);
    CHECK(g.residue_at(ExtScalar(2)).is_zero());
}

TEST_CASE("residue of z^2/(z-2)^3") {
    // z^2 = 4 + 4w + w^2 around w = z-2, so the w^-1 coefficient of z^2/w^3 is 1.
    Poly lin = Poly::linear_root(ExtScalar(2));
    RatFunc h(Poly::monomial(2), lin * lin * lin);
    CHECK(h.residue_at(ExtScalar(2)) == ExtScalar(1));
}

TEST_CASE("antiderivative") {
    // d/dz (1/(z-1)) = -1/(z-1)^2
    Poly lin = Poly::linear_root(ExtScalar(1));
    RatFunc f(Poly(ExtScalar(-1)), lin * lin);
    auto anti = f.antiderivative();
    REQUIRE(anti.has_value());
    CHECK(anti->derivative() == f);
    // 1/z has no rational antiderivative.
    RatFunc logcase(Poly(ExtScalar(1)), Poly::monomial(1));
    CHECK(!logcase.antiderivative().has_value());
    // polynomial part
    RatFunc poly(Poly(std::vector<ExtScalar>{ExtScalar(0), ExtScalar(0), ExtScalar(3)}), Poly(ExtScalar(1)));
    auto pa = poly.antiderivative();
    REQUIRE(pa.has_value());
    CHECK(pa->derivative() == poly);
}

TEST_CASE("laurent basics") {
    LaurentSeries geo = (LaurentSeries::monomial(ExtScalar(1), 0, 3) -
                         LaurentSeries::variable(3)).inverse();
    CHECK(geo.coeff(0) == ExtScalar(1));
    CHECK(geo.coeff(1) == ExtScalar(1));
    CHECK(geo.coeff(3) == ExtScalar(1));

    LaurentSeries f = from_ints({1, 0, 1}, -2, 4); // t^-2 + 1
    LaurentSeries t2 = LaurentSeries::monomial(ExtScalar(1), 2, 6);
    LaurentSeries prod = f * t2;
    CHECK(prod.coeff(0) == ExtScalar(1));
    CHECK(prod.coeff(2) == ExtScalar(1));

    LaurentSeries d = from_ints({1}, -1, 3).derivative(); // d/dt t^-1 = -t^-2
    CHECK(d.coeff(-2) == ExtScalar(-1));

    CHECK_THROWS_AS(geo.coeff(4), TruncationError);
}

TEST_CASE("composition") {
    // outer = v^2, inner = -s: s^2
    LaurentSeries outer = LaurentSeries::monomial(ExtScalar(1), 2, 5);
    LaurentSeries inner = LaurentSeries::monomial(ExtScalar(-1), 1, 5);
    LaurentSeries comp = outer.compose(inner);
    CHECK(comp.coeff(2) == ExtScalar(1));
    CHECK(comp.coeff(3) == ExtScalar());

    // outer = v^-1, inner = s(1+s): s^-1 - 1 + s + O(s^2)
    LaurentSeries outer2 = LaurentSeries::monomial(ExtScalar(1), -1, 4);
    LaurentSeries inner2 = from_ints({1, 1}, 1, 4); // s + s^2
    LaurentSeries comp2 = outer2.compose(inner2);
    CHECK(comp2.coeff(-1) == ExtScalar(1));
    CHECK(comp2.coeff(0) == ExtScalar(-1));
    CHECK(comp2.coeff(1) == ExtScalar(1));

    // exp truncation composed with t: 1 + t + t^2/2 + t^3/6
    std::vector<ExtScalar> e{ExtScalar(1), ExtScalar(1), ExtScalar(Rational(1, 2)), ExtScalar(Rational(1, 6))};
    LaurentSeries expo(std::move(e), 0, 3);
    LaurentSeries t = LaurentSeries::variable(3);
    LaurentSeries comp3 = expo.compose(t);
    CHECK(comp3.coeff(3) == ExtScalar(Rational(1, 6)));
}

TEST_CASE("reversion") {
    // s = 2v -> w = v/2
    LaurentSeries s1 = LaurentSeries::monomial(ExtScalar(2), 1, 4);
    CHECK(s1.reversion().coeff(1) == ExtScalar(Rational(1, 2)));

    // s = v + v^2 -> w = v - v^2 + 2v^3 (Lagrange inversion)
    LaurentSeries s2 = from_ints({1, 1}, 1, 3);
    LaurentSeries w = s2.reversion();
    CHECK(w.coeff(1) == ExtScalar(1));
    CHECK(w.coeff(2) == ExtScalar(-1));
    CHECK(w.coeff(3) == ExtScalar(2));
}

TEST_CASE("reversion is two-sided on random series") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coin(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ExtScalar> c{ExtScalar(trial % 2 ? 1 : -2)};
        for (int j = 0; j < 6; ++j) {
            ExtScalar x(coin(rng));
            if (trial % 3 == 0) x = x * ExtScalar::sqrt2() + ExtScalar(coin(rng));
            c.push_back(x);
        }
        LaurentSeries s(std::move(c), 1, 7);
        LaurentSeries w = s.reversion();
        LaurentSeries id1 = s.compose(w);
        LaurentSeries id2 = w.compose(s);
        for (int k = 1; k <= std::min(id1.order(), id2.order()); ++k) {
            CHECK(id1.coeff(k) == (k == 1 ? ExtScalar(1) : ExtScalar()));
            CHECK(id2.coeff(k) == (k == 1 ? ExtScalar(1) : ExtScalar()));
        }
    }
}

TEST_CASE("sqrt and antiderivative round trips") {
    LaurentSeries f = from_ints({2, 1, -1, 3}, 2, 8); // valuation 2, leading 2
    LaurentSeries root = f.sqrt();
    LaurentSeries back = root * root;
    for (int k = 2; k <= back.order(); ++k) CHECK(back.coeff(k) == f.coeff(k));

    LaurentSeries g = from_ints({3, 1, 4}, 0, 4);
    CHECK(g.antiderivative().derivative().coeff(1) == g.coeff(1));
    LaurentSeries bad = from_ints({1}, -1, 3);
    CHECK_THROWS(bad.antiderivative());
}

#include "thetarec/ext_scalar.hpp"

#include <doctest.h>
#include <random>

using namespace thetarec;

namespace {

ExtScalar random_scalar(std::mt19937& rng, int spread = 7) {
    std::uniform_int_distribution<int> num(-spread, spread);
    std::uniform_int_distribution<int> den(1, spread);
    ExtScalar s;
    for (int k = 0; k < ExtScalar::kDim; ++k) s.coord(k) = Rational(num(rng), den(rng));
    return s;
}

} // namespace

TEST_CASE("rational arithmetic normalizes") {
    Rational a(6, -4);
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK(a.to_string() == "-3/2");
    CHECK(Rational::from_string("-3/2") == a);
    CHECK(Rational::from_string("7") == Rational(7));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK_THROWS(Rational(1, 0));
    CHECK(Rational(35, 41472).to_string() == "35/41472");
}

TEST_CASE("basis products") {
    CHECK(ExtScalar::sqrt2() * ExtScalar::sqrt3() == ExtScalar::sqrt6());
    CHECK(ExtScalar::sqrt_minus3() * ExtScalar::sqrt_minus3() == ExtScalar(-3));
    CHECK(ExtScalar::i() * ExtScalar::i() == ExtScalar(-1));
    CHECK(ExtScalar::sqrt2() * ExtScalar::sqrt6() == ExtScalar::basis(2, Rational(2))); // 2 sqrt3
    // (-i/sqrt6)*(i sqrt6) = 1: the leading-term normalization of B(P_1, t).
    ExtScalar minus_i_over_sqrt6 = ExtScalar::basis(7, Rational(-1, 6)); // -i sqrt6/6
    ExtScalar i_sqrt6 = ExtScalar::basis(7);
    CHECK(minus_i_over_sqrt6 * i_sqrt6 == ExtScalar(1));
}

TEST_CASE("field axioms on random elements") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        ExtScalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!a.is_zero()) CHECK(a * a.inverse() == ExtScalar(1));
        CHECK((a * b).conj() == a.conj() * b.conj());
        ExtScalar norm = a * a.conj();
        norm = norm * norm.conj_sqrt2();
        norm = norm * norm.conj_sqrt3();
        CHECK(norm.is_rational());
    }
}

TEST_CASE("sqrt_in_field") {
    auto r = sqrt_in_field(ExtScalar(-6));
    REQUIRE(r.has_value());
    CHECK(*r == ExtScalar::basis(7)); // i sqrt6, positive branch
    CHECK(*r * *r == ExtScalar(-6));

    auto s2 = sqrt_in_field(ExtScalar(2));
    REQUIRE(s2.has_value());
    CHECK(*s2 == ExtScalar::sqrt2());

    CHECK(!sqrt_in_field(ExtScalar(5)).has_value());

    auto s9 = sqrt_in_field(ExtScalar(Rational(9, 4)));
    REQUIRE(s9.has_value());
    CHECK(*s9 == ExtScalar(Rational(3, 2)));

    // Deterministic branch: the first nonzero coordinate comes out positive.
    auto sm2 = sqrt_in_field(ExtScalar(-2));
    REQUIRE(sm2.has_value());
    CHECK(*sm2 == ExtScalar::basis(5)); // i sqrt2
    for (int k = 0; k < ExtScalar::kDim; ++k) {
        ExtScalar sq = ExtScalar::basis(k, Rational(3, 5));
        auto root = sqrt_in_field(sq * sq);
        REQUIRE(root.has_value());
        CHECK(*root * *root == sq * sq);
        int first = 0;
        while (root->coord(first).is_zero()) ++first;
        CHECK(root->coord(first).sign() > 0);
    }
}

TEST_CASE("division by zero reports") {
    CHECK_THROWS_AS(ExtScalar(1) / ExtScalar(), std::domain_error);
    CHECK_THROWS_AS(ExtScalar().inverse(), std::domain_error);
}

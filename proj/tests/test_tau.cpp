#include "thetarec/tau.hpp"

#include <doctest.h>

using namespace thetarec;

namespace {

TauTable bessel_table(int g_max, int n_max) {
    auto a = std::make_shared<AnalyzedCurve>(SpectralCurve::bessel(), 6 * g_max + 2 * n_max + 4);
    CorrelatorEngine engine(a);
    return assemble_tau_table(engine, SelectionRule::bgw, g_max, n_max);
}

TauTable airy_table(int g_max, int n_max) {
    auto a = std::make_shared<AnalyzedCurve>(SpectralCurve::airy(), 6 * g_max + 2 * n_max + 4);
    CorrelatorEngine engine(a);
    return assemble_tau_table(engine, SelectionRule::kw, g_max, n_max);
}

} // namespace

TEST_CASE("bessel table reproduces the low genus expansion") {
    TauTable t = bessel_table(3, 6);
    CHECK(t.entry(1, {0}) == Rational(1, 8));
    CHECK(t.entry(1, {0, 0}) == Rational(1, 8));
    CHECK(t.entry(1, {0, 0, 0}) == Rational(2, 8));
    CHECK(t.entry(2, {1}) == Rational(3, 128));
    CHECK(t.entry(2, {1, 0}) == Rational(9, 128));
    CHECK(t.entry(3, {2}) == Rational(15, 1024));
    CHECK(t.entry(3, {1, 1}) == Rational(63, 512));
    CHECK(t.entry(3, {2, 0}) == Rational(75, 1024));
    // degree-violating entries are zero
    CHECK(t.entry(2, {0}) == Rational(0));
}

TEST_CASE("airy table header") {
    TauTable t = airy_table(2, 5);
    CHECK(t.entry(0, {0, 0, 0}) == Rational(1));
    CHECK(t.entry(1, {1}) == Rational(1, 24));
    CHECK(t.entry(0, {0, 0, 0, 1}) == Rational(1));
    // genus 0: <prod tau_k> = (n-3)!/prod k!
    CHECK(t.entry(0, {0, 0, 0, 0, 2}) == Rational(1));
    CHECK(t.entry(0, {0, 0, 0, 1, 1}) == Rational(2));
    CHECK(t.entry(2, {4}) == Rational(1, 1152));
}

TEST_CASE("dilaton homogeneity across the bessel table") {
    TauTable t = bessel_table(3, 6);
    CHECK(dilaton_homogeneity_check(t, 3));
}

TEST_CASE("bgw initial condition") {
    TauTable bessel = bessel_table(3, 6);
    CHECK(bgw_initial_condition_check(bessel));
    TauTable airy = airy_table(2, 4);
    CHECK(!bgw_initial_condition_check(airy));
}

TEST_CASE("kdv holds for bessel and airy and fails when perturbed") {
    const int degree = 3;
    TauTable bessel = bessel_table(3, degree + 5);
    auto rep = kdv_check(bessel, degree, 2);
    CHECK(rep.passed);

    TauTable airy = airy_table(2, degree + 5);
    auto repa = kdv_check(airy, degree, 2);
    CHECK(repa.passed);

    // Perturb an entry the equation reads (two zero indices feed the second
    // t0-derivative): the check must notice.
    TauTable corrupt(SelectionRule::bgw, "corrupt");
    for (const auto& [key, value] : bessel.entries()) {
        Rational v = value;
        if (key.first == 2 && key.second == std::vector<int>{0, 0, 1}) v += Rational(1);
        corrupt.insert(key.first, key.second, v);
    }
    corrupt.set_range(bessel.g_max(), bessel.n_max());
    auto repc = kdv_check(corrupt, degree, 2);
    CHECK(!repc.passed);

    TauTable corrupt2(SelectionRule::bgw, "corrupt2");
    for (const auto& [key, value] : bessel.entries()) {
        Rational v = value;
        if (key.first == 1 && key.second == std::vector<int>{0, 0, 0}) v += Rational(1);
        corrupt2.insert(key.first, key.second, v);
    }
    corrupt2.set_range(bessel.g_max(), bessel.n_max());
    CHECK(!kdv_check(corrupt2, degree, 2).passed);
}

TEST_CASE("kdv reports missing entries") {
    TauTable small = bessel_table(3, 3);
    auto rep = kdv_check(small, 3, 2);
    CHECK(!rep.passed);
    CHECK(rep.detail.find("missing") != std::string::npos);
}

TEST_CASE("flat a2 table matches the Frobenius TFT at (0,3)") {
    auto a = std::make_shared<AnalyzedCurve>(SpectralCurve::a2(), 18);
    CorrelatorEngine engine(a);
    FlatTauTable t = assemble_flat_table(engine, 0, 3);
    // Theta-free A2 invariants at (0,3) are the TFT structure constants
    // F_112 = F_222 = 1 up to the xi-vs-insertion pairing constant, which is
    // the same for every slot pattern; their ratio is exact.
    ExtScalar e112 = t.entry(0, {{1, 0}, {1, 0}, {2, 0}});
    ExtScalar e222 = t.entry(0, {{2, 0}, {2, 0}, {2, 0}});
    CHECK(e112 == e222);
    CHECK(t.entry(0, {{1, 0}, {1, 0}, {1, 0}}).is_zero());
    CHECK(t.entry(0, {{1, 0}, {2, 0}, {2, 0}}).is_zero());
    // and the pairing against the insertion polynomials is the TFT exactly:
    // each slot pairing constant is -+2 sqrt(-3) (alpha = 1, 2).
    ExtScalar c1 = ExtScalar(2) * ExtScalar::sqrt_minus3();
    ExtScalar c2 = -c1;
    CHECK(e112 * c1 * c1 * c2 == ExtScalar(1));
    CHECK(e222 * c2 * c2 * c2 == ExtScalar(1));
}

TEST_CASE("multiseries arithmetic") {
    MultiSeries a(2, 4);
    a.add_term({1, 0}, Rational(2));
    a.add_term({0, 1}, Rational(1, 2));
    MultiSeries b = a * a;
    CHECK(b.coefficient({2, 0}) == Rational(4));
    CHECK(b.coefficient({1, 1}) == Rational(2));
    CHECK(b.coefficient({0, 2}) == Rational(1, 4));
    CHECK((a * b == b * a));
    MultiSeries d = b.derivative(0);
    CHECK(d.coefficient({1, 0}) == Rational(8));
}

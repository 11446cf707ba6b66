#pragma once

#include "thetarec/ext_scalar.hpp"

#include <vector>

namespace thetarec {

/// Dense univariate polynomial over K.  Trailing zeros are stripped; the zero
/// polynomial has degree -1.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<ExtScalar> coeffs) : c_(std::move(coeffs)) { strip(); }
    Poly(const ExtScalar& constant) { c_.push_back(constant); strip(); }

    static Poly monomial(int degree, ExtScalar coeff = ExtScalar(1));
    /// z - a
    static Poly linear_root(const ExtScalar& a);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<ExtScalar>& coeffs() const { return c_; }
    ExtScalar coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : ExtScalar(); }
    const ExtScalar& leading() const { return c_.back(); }

    ExtScalar eval(const ExtScalar& z) const;
    Poly derivative() const;

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator*(const ExtScalar& s) const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Quotient and remainder; divisor must be nonzero.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    friend Poly operator/(const Poly& a, const Poly& b);
    friend Poly operator%(const Poly& a, const Poly& b);

    /// Monic gcd.
    static Poly gcd(Poly a, Poly b);

    Poly monic() const;

    /// All roots in K, with multiplicity, via rational-root extraction and
    /// quadratic solving over K.  Throws naming the stuck factor if an
    /// irreducible factor of degree > 2 (or one without K-roots) remains and
    /// the polynomial is required to split.
    std::vector<std::pair<ExtScalar, int>> roots_in_K(bool require_split = true) const;

    std::string to_string(const std::string& var = "z") const;

private:
    void strip() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<ExtScalar> c_;
};

/// Rational function num/den over K; den monic and gcd(num, den) = 1.
class RatFunc {
public:
    RatFunc() : num_(), den_(ExtScalar(1)) {}
    RatFunc(Poly num, Poly den);
    RatFunc(const ExtScalar& c) : num_(c), den_(ExtScalar(1)) {}
    static RatFunc variable() { return RatFunc(Poly::monomial(1), Poly(ExtScalar(1))); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    ExtScalar eval(const ExtScalar& z) const;
    bool has_pole_at(const ExtScalar& z) const { return den_.eval(z).is_zero(); }
    /// Order of the pole at z (0 if regular there).
    int pole_order_at(const ExtScalar& z) const;

    RatFunc derivative() const;

    RatFunc operator-() const { return RatFunc(-num_, den_); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    RatFunc operator*(const ExtScalar& s) const { return RatFunc(num_ * s, den_); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    /// Residue at the point a (exact; a need not be a pole).
    ExtScalar residue_at(const ExtScalar& a) const;

    /// Residue at infinity of f dz, equal to minus the sum of finite residues.
    /// Requires the denominator to split over K.
    ExtScalar residue_at_infinity() const;

    /// Order of vanishing at infinity of the differential f dz
    /// (deg den - deg num - 2); the zero function returns a large sentinel.
    int order_at_infinity_as_differential() const;

    /// Exact antiderivative when one exists as a rational function; nullopt if
    /// any partial-fraction term would need a logarithm.
    std::optional<RatFunc> antiderivative() const;

    std::string to_string(const std::string& var = "z") const;

private:
    Poly num_, den_;
};

} // namespace thetarec

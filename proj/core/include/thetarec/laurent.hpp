#pragma once

#include "thetarec/poly.hpp"

#include <vector>

namespace thetarec {

/// Thrown when a requested coefficient lies beyond a series' guaranteed
/// truncation order; callers recover by re-analyzing with a larger order.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Truncated Laurent series over K in one local variable.  Coefficients are
/// stored for every exponent in [lo, order]; exponents above `order` are
/// unknown, not zero.  Binary operations propagate orders pessimistically.
class LaurentSeries {
public:
    LaurentSeries() : lo_(0), order_(-1) {}
    /// Zero series known up to `order`.
    static LaurentSeries zero(int order, int lo = 0);
    /// c * s^k, known up to `order`.
    static LaurentSeries monomial(const ExtScalar& c, int k, int order);
    static LaurentSeries variable(int order) { return monomial(ExtScalar(1), 1, order); }
    LaurentSeries(std::vector<ExtScalar> coeffs, int lo, int order);

    int lo() const { return lo_; }
    int order() const { return order_; }
    bool known_range_empty() const { return order_ < lo_; }

    /// Coefficient of s^k; throws TruncationError above the guaranteed order.
    const ExtScalar& coeff(int k) const;

    /// Lowest exponent with a nonzero coefficient; order()+1 when the series
    /// vanishes on its whole known range.
    int valuation() const;
    bool is_zero_known() const { return valuation() > order_; }

    LaurentSeries truncated(int new_order) const;
    LaurentSeries shifted(int k) const; // multiply by s^k

    LaurentSeries operator-() const;
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
    LaurentSeries operator*(const ExtScalar& c) const;

    /// Multiplicative inverse; the valuation coefficient must be known and nonzero.
    LaurentSeries inverse() const;

    LaurentSeries derivative() const;
    /// Term-wise antiderivative with zero constant; throws if an s^-1 term is present.
    LaurentSeries antiderivative() const;

    /// Substitute s -> -s.
    LaurentSeries negate_variable() const;
    LaurentSeries even_part() const;
    LaurentSeries odd_part() const;

    /// this(inner); requires valuation(inner) >= 1, or *this a polynomial part
    /// only (lo >= 0).  For Laurent outer parts the inner inverse is used.
    LaurentSeries compose(const LaurentSeries& inner) const;

    /// Compositional inverse w with this(w(v)) = v; requires valuation exactly 1.
    LaurentSeries reversion() const;

    /// Square root with even valuation; leading coefficient root taken from
    /// sqrt_in_field unless `leading_root` is supplied.
    LaurentSeries sqrt(const ExtScalar* leading_root = nullptr) const;

    std::string to_string(const std::string& var = "s") const;

private:
    void normalize();
    int lo_;
    int order_;
    std::vector<ExtScalar> c_; // size order_-lo_+1 (0 when order_ < lo_)
};

/// Expansion of a polynomial around a point: p(a + t) as a series in t.
LaurentSeries expand_poly(const Poly& p, const ExtScalar& a, int order);

/// Expansion of num/den around a point (Laurent if den vanishes at a).
LaurentSeries expand_ratfunc(const RatFunc& f, const ExtScalar& a, int order);

/// Compose a rational function with a series: f(g(s)) where g
/// has valuation >= 0; if den(f)(g0) = 0 the result is Laurent.
LaurentSeries compose_ratfunc(const RatFunc& f, const LaurentSeries& g);

} // namespace thetarec

#include "thetarec/laurent.hpp"

#include <algorithm>

namespace thetarec {

namespace {
const ExtScalar kZero{};
}

LaurentSeries LaurentSeries::zero(int order, int lo) {
    LaurentSeries s;
    s.lo_ = lo;
    s.order_ = order;
    s.c_.assign(std::max(0, order - lo + 1), ExtScalar());
    return s;
}

LaurentSeries LaurentSeries::monomial(const ExtScalar& c, int k, int order) {
    LaurentSeries s = zero(order, std::min(k, order));
    if (k <= order) s.c_[k - s.lo_] = c;
    return s;
}

LaurentSeries::LaurentSeries(std::vector<ExtScalar> coeffs, int lo, int order)
    : lo_(lo), order_(order), c_(std::move(coeffs)) {
    c_.resize(std::max(0, order_ - lo_ + 1));
    normalize();
}

void LaurentSeries::normalize() {
    // Raise lo past known leading zeros to keep valuations tight.
    size_t skip = 0;
    while (skip < c_.size() && c_[skip].is_zero() && lo_ + (int)skip < 0) ++skip;
    if (skip > 0) {
        c_.erase(c_.begin(), c_.begin() + skip);
        lo_ += (int)skip;
    }
}

const ExtScalar& LaurentSeries::coeff(int k) const {
    if (k > order_)
        throw TruncationError("LaurentSeries: coefficient of s^" + std::to_string(k) +
                              " beyond guaranteed order " + std::to_string(order_) +
                              "; re-run with a larger truncation order");
    if (k < lo_) return kZero;
    return c_[k - lo_];
}

int LaurentSeries::valuation() const {
    for (size_t j = 0; j < c_.size(); ++j)
        if (!c_[j].is_zero()) return lo_ + (int)j;
    return order_ + 1;
}

LaurentSeries LaurentSeries::truncated(int new_order) const {
    LaurentSeries s = *this;
    if (new_order < order_) {
        s.order_ = new_order;
        s.c_.resize(std::max(0, new_order - lo_ + 1));
    }
    return s;
}

LaurentSeries LaurentSeries::shifted(int k) const {
    LaurentSeries s = *this;
    s.lo_ += k;
    s.order_ += k;
    return s;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries s = *this;
    for (auto& x : s.c_) x = -x;
    return s;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    int order = std::min(a.order_, b.order_);
    int lo = std::min(a.lo_, b.lo_);
    LaurentSeries s = LaurentSeries::zero(order, lo);
    for (int k = lo; k <= order; ++k) {
        ExtScalar v;
        if (k >= a.lo_ && k <= a.order_) v += a.c_[k - a.lo_];
        if (k >= b.lo_ && k <= b.order_) v += b.c_[k - b.lo_];
        s.c_[k - lo] = std::move(v);
    }
    s.normalize();
    return s;
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    int va = a.valuation(), vb = b.valuation();
    int order = std::min(a.order_ + vb, b.order_ + va);
    if (a.is_zero_known() && b.is_zero_known()) order = std::max(a.order_ + vb, b.order_ + va);
    int lo = va + vb;
    LaurentSeries s = LaurentSeries::zero(order, std::min(lo, order + 1));
    for (int j = va; j <= std::min(a.order_, order - vb); ++j) {
        const ExtScalar& aj = a.coeff(j);
        if (aj.is_zero()) continue;
        for (int k = vb; k <= std::min(b.order_, order - j); ++k) {
            const ExtScalar& bk = b.coeff(k);
            if (bk.is_zero()) continue;
            s.c_[j + k - s.lo_] += aj * bk;
        }
    }
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::operator*(const ExtScalar& c) const {
    LaurentSeries s = *this;
    for (auto& x : s.c_) x = x * c;
    return s;
}

LaurentSeries LaurentSeries::inverse() const {
    int v = valuation();
    if (v > order_) throw std::domain_error("LaurentSeries: inverse of (known-)zero series");
    ExtScalar c = coeff(v);
    ExtScalar cinv = c.inverse();
    int n = order_ - v; // relative order of the unit part 1 + u
    // unit part u_k = coeff(v+k)/c for k >= 1; invert 1 + u.
    std::vector<ExtScalar> g(n + 1);
    g[0] = ExtScalar(1);
    for (int k = 1; k <= n; ++k) {
        ExtScalar acc;
        for (int j = 1; j <= k; ++j) {
            ExtScalar uj = coeff(v + j) * cinv;
            if (uj.is_zero()) continue;
            acc += uj * g[k - j];
        }
        g[k] = -acc;
    }
    for (auto& x : g) x = x * cinv;
    return LaurentSeries(std::move(g), -v, n - v);
}

LaurentSeries LaurentSeries::derivative() const {
    LaurentSeries s = zero(order_ - 1, lo_ - 1);
    for (int k = lo_; k <= order_; ++k) {
        if (k == 0) continue;
        s.c_[k - 1 - s.lo_] = c_[k - lo_] * ExtScalar(Rational(k));
    }
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::antiderivative() const {
    if (lo_ <= -1 && order_ >= -1 && !coeff(-1).is_zero())
        throw std::domain_error("LaurentSeries: antiderivative of a series with an s^-1 term");
    LaurentSeries s = zero(order_ + 1, lo_ + 1);
    for (int k = lo_; k <= order_; ++k) {
        if (k == -1) continue;
        s.c_[k + 1 - s.lo_] = c_[k - lo_] * ExtScalar(Rational(1, k + 1));
    }
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::negate_variable() const {
    LaurentSeries s = *this;
    for (int k = lo_; k <= order_; ++k) {
        if (k & 1) s.c_[k - lo_] = -s.c_[k - lo_];
    }
    return s;
}

LaurentSeries LaurentSeries::even_part() const {
    LaurentSeries s = *this;
    for (int k = lo_; k <= order_; ++k) {
        if (k & 1) s.c_[k - lo_] = ExtScalar();
    }
    return s;
}

LaurentSeries LaurentSeries::odd_part() const {
    LaurentSeries s = *this;
    for (int k = lo_; k <= order_; ++k) {
        if (!(k & 1)) s.c_[k - lo_] = ExtScalar();
    }
    return s;
}

LaurentSeries LaurentSeries::compose(const LaurentSeries& inner) const {
    int vi = inner.valuation();
    if (lo_ < 0 && vi < 1)
        throw std::domain_error("LaurentSeries: composition needs positive inner valuation for Laurent outer");
    // Nonnegative part by Horner, negative part via powers of the inner inverse.
    LaurentSeries acc = zero(inner.order_, 0);
    for (int k = std::max(order_, 0); k >= 0; --k) {
        acc = acc * inner;
        if (k < lo_ || k > order_) continue;
        const ExtScalar& ck = c_[k - lo_];
        if (!ck.is_zero()) acc = acc + monomial(ck, 0, acc.order());
    }
    if (lo_ < 0) {
        LaurentSeries inv = inner.inverse();
        LaurentSeries pw = inv;
        for (int j = -1; j >= lo_; --j) {
            const ExtScalar& cj = c_[j - lo_];
            if (!cj.is_zero()) acc = acc + pw * cj;
            if (j > lo_) pw = pw * inv;
        }
    }
    return acc;
}

LaurentSeries LaurentSeries::reversion() const {
    if (valuation() != 1)
        throw std::domain_error("LaurentSeries: reversion needs valuation exactly 1");
    int n = order_;
    ExtScalar c1inv = coeff(1).inverse();
    std::vector<ExtScalar> w(n + 1);
    w[1] = c1inv;
    for (int m = 2; m <= n; ++m) {
        LaurentSeries wm(std::vector<ExtScalar>(w.begin(), w.begin() + m), 0, n);
        LaurentSeries e = compose(wm);
        w[m] = -(e.coeff(m) * c1inv);
    }
    return LaurentSeries(std::move(w), 0, n);
}

LaurentSeries LaurentSeries::sqrt(const ExtScalar* leading_root) const {
    int v = valuation();
    if (v > order_) throw std::domain_error("LaurentSeries: sqrt of (known-)zero series");
    if (v & 1) throw std::domain_error("LaurentSeries: sqrt needs even valuation");
    ExtScalar c = coeff(v);
    ExtScalar r;
    if (leading_root) {
        r = *leading_root;
        if (r * r != c)
            throw std::domain_error("LaurentSeries: supplied leading root does not square to the leading coefficient");
    } else {
        auto rr = sqrt_in_field(c);
        if (!rr)
            throw std::domain_error("LaurentSeries: leading coefficient " + c.to_string() +
                                    " has no square root in K; supply a branch constant");
        r = *rr;
    }
    ExtScalar cinv = c.inverse();
    int n = order_ - v;
    std::vector<ExtScalar> g(n + 1);
    g[0] = ExtScalar(1);
    ExtScalar half(Rational(1, 2));
    for (int k = 1; k <= n; ++k) {
        ExtScalar acc = coeff(v + k) * cinv; // u_k
        for (int j = 1; j < k; ++j) acc -= g[j] * g[k - j];
        g[k] = acc * half;
    }
    LaurentSeries unit(std::move(g), 0, n);
    return (unit * r).shifted(v / 2);
}

std::string LaurentSeries::to_string(const std::string& var) const {
    std::string s;
    for (int k = lo_; k <= order_; ++k) {
        const ExtScalar& c = c_[k - lo_];
        if (c.is_zero()) continue;
        if (!s.empty()) s += " + ";
        std::string cs = c.to_string();
        if (cs.find(' ') != std::string::npos) cs = "(" + cs + ")";
        if (k == 0) {
            s += cs;
        } else {
            s += (cs == "1" ? "" : cs + "*") + var;
            if (k != 1) s += "^" + std::to_string(k);
        }
    }
    if (s.empty()) s = "0";
    return s + " + O(" + var + "^" + std::to_string(order_ + 1) + ")";
}

LaurentSeries expand_poly(const Poly& p, const ExtScalar& a, int order) {
    LaurentSeries t = LaurentSeries::monomial(a, 0, order) + LaurentSeries::variable(order);
    LaurentSeries acc = LaurentSeries::zero(order, 0);
    for (int k = p.degree(); k >= 0; --k) {
        acc = acc * t;
        if (!p.coeff(k).is_zero()) acc = acc + LaurentSeries::monomial(p.coeff(k), 0, order);
    }
    return acc;
}

LaurentSeries expand_ratfunc(const RatFunc& f, const ExtScalar& a, int order) {
    LaurentSeries n = expand_poly(f.num(), a, order);
    LaurentSeries d = expand_poly(f.den(), a, order);
    return n * d.inverse();
}

LaurentSeries compose_ratfunc(const RatFunc& f, const LaurentSeries& g) {
    if (g.valuation() < 0)
        throw std::domain_error("compose_ratfunc: inner series must have nonnegative valuation");
    LaurentSeries n = LaurentSeries::zero(g.order(), 0);
    for (int k = f.num().degree(); k >= 0; --k) {
        n = n * g;
        if (!f.num().coeff(k).is_zero()) n = n + LaurentSeries::monomial(f.num().coeff(k), 0, n.order());
    }
    LaurentSeries d = LaurentSeries::zero(g.order(), 0);
    for (int k = f.den().degree(); k >= 0; --k) {
        d = d * g;
        if (!f.den().coeff(k).is_zero()) d = d + LaurentSeries::monomial(f.den().coeff(k), 0, d.order());
    }
    return n * d.inverse();
}

} // namespace thetarec

#include "thetarec/poly.hpp"

#include <algorithm>

namespace thetarec {

Poly Poly::monomial(int degree, ExtScalar coeff) {
    std::vector<ExtScalar> c(degree + 1);
    c[degree] = std::move(coeff);
    return Poly(std::move(c));
}

Poly Poly::linear_root(const ExtScalar& a) {
    return Poly(std::vector<ExtScalar>{-a, ExtScalar(1)});
}

ExtScalar Poly::eval(const ExtScalar& z) const {
    ExtScalar acc;
    for (int k = degree(); k >= 0; --k) acc = acc * z + c_[k];
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<ExtScalar> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * ExtScalar(Rational((long long)k));
    return Poly(std::move(d));
}

Poly Poly::operator-() const {
    std::vector<ExtScalar> d(c_.size());
    for (size_t k = 0; k < c_.size(); ++k) d[k] = -c_[k];
    return Poly(std::move(d));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<ExtScalar> d(std::max(a.c_.size(), b.c_.size()));
    for (size_t k = 0; k < d.size(); ++k) {
        if (k < a.c_.size()) d[k] += a.c_[k];
        if (k < b.c_.size()) d[k] += b.c_[k];
    }
    return Poly(std::move(d));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<ExtScalar> d(a.c_.size() + b.c_.size() - 1);
    for (size_t j = 0; j < a.c_.size(); ++j) {
        if (a.c_[j].is_zero()) continue;
        for (size_t k = 0; k < b.c_.size(); ++k) {
            if (b.c_[k].is_zero()) continue;
            d[j + k] += a.c_[j] * b.c_[k];
        }
    }
    return Poly(std::move(d));
}

Poly Poly::operator*(const ExtScalar& s) const {
    std::vector<ExtScalar> d(c_.size());
    for (size_t k = 0; k < c_.size(); ++k) d[k] = c_[k] * s;
    return Poly(std::move(d));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    std::vector<ExtScalar> rem = a.c_;
    int db = b.degree();
    ExtScalar lead_inv = b.leading().inverse();
    std::vector<ExtScalar> quot(a.degree() >= db ? a.degree() - db + 1 : 0);
    for (int k = a.degree(); k >= db; --k) {
        if (rem[k].is_zero()) continue;
        ExtScalar f = rem[k] * lead_inv;
        quot[k - db] = f;
        for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.c_[j];
    }
    q = Poly(std::move(quot));
    r = Poly(std::move(rem));
}

Poly operator/(const Poly& a, const Poly& b) {
    Poly q, r;
    Poly::divmod(a, b, q, r);
    return q;
}

Poly operator%(const Poly& a, const Poly& b) {
    Poly q, r;
    Poly::divmod(a, b, q, r);
    return r;
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return *this * leading().inverse();
}

namespace {

std::vector<Integer> small_divisors(const Integer& n_in) {
    Integer n = n_in < 0 ? Integer(-n_in) : n_in;
    std::vector<Integer> divs;
    if (n == 0) return divs;
    for (Integer d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            divs.push_back(n / d);
        }
        if (d > 1000000) break; // desk-scale cap
    }
    return divs;
}

} // namespace

std::vector<std::pair<ExtScalar, int>> Poly::roots_in_K(bool require_split) const {
    std::vector<std::pair<ExtScalar, int>> roots;
    Poly p = monic();
    auto record = [&roots](const ExtScalar& r) {
        for (auto& [root, mult] : roots) {
            if (root == r) { ++mult; return; }
        }
        roots.emplace_back(r, 1);
    };

    bool progress = true;
    while (p.degree() > 0 && progress) {
        progress = false;
        if (p.degree() == 1) {
            record(-p.coeff(0));
            p = Poly(ExtScalar(1));
            break;
        }
        if (p.degree() == 2) {
            // z^2 + bz + c over K
            ExtScalar b = p.coeff(1), c0 = p.coeff(0);
            ExtScalar disc = b * b - ExtScalar(Rational(4)) * c0;
            auto s = sqrt_in_field(disc);
            if (!s) break;
            ExtScalar half = ExtScalar(Rational(1, 2));
            record((-b + *s) * half);
            record((-b - *s) * half);
            p = Poly(ExtScalar(1));
            break;
        }
        // Rational-root extraction for polynomials with rational coefficients.
        bool rational_coeffs = true;
        for (const auto& c : p.coeffs()) {
            if (!c.is_rational()) { rational_coeffs = false; break; }
        }
        if (rational_coeffs) {
            Integer common_den = 1;
            for (const auto& c : p.coeffs()) {
                Integer d = c.rational_part().den();
                common_den = common_den / boost::multiprecision::gcd(common_den, d) * d;
            }
            Integer a0 = (p.coeff(0).rational_part() * Rational(common_den)).num();
            Integer an = (p.leading().rational_part() * Rational(common_den)).num();
            if (a0 == 0) {
                record(ExtScalar());
                p = p / Poly::monomial(1);
                progress = true;
                continue;
            }
            for (const Integer& pn : small_divisors(a0)) {
                for (const Integer& qn : small_divisors(an)) {
                    for (int sgn : {1, -1}) {
                        ExtScalar cand((Rational(pn * sgn, qn)));
                        while (p.degree() > 0 && p.eval(cand).is_zero()) {
                            record(cand);
                            p = p / Poly::linear_root(cand);
                            progress = true;
                        }
                    }
                }
            }
        }
    }
    if (p.degree() > 0 && require_split) {
        throw std::domain_error("Poly: irreducible factor without roots in K = Q(i,sqrt2,sqrt3): " +
                                p.to_string());
    }
    return roots;
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (int k = degree(); k >= 0; --k) {
        if (c_[k].is_zero()) continue;
        if (!s.empty()) s += " + ";
        std::string c = c_[k].to_string();
        bool needs_parens = c.find(' ') != std::string::npos;
        if (k == 0) {
            s += c;
        } else {
            if (c == "1") {
            } else if (needs_parens) {
                s += "(" + c + ")*";
            } else {
                s += c + "*";
            }
            s += var;
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    if (num_.is_zero()) {
        den_ = Poly(ExtScalar(1));
        return;
    }
    Poly g = Poly::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
    ExtScalar lead = den_.leading();
    if (lead != ExtScalar(1)) {
        ExtScalar inv = lead.inverse();
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

ExtScalar RatFunc::eval(const ExtScalar& z) const {
    ExtScalar d = den_.eval(z);
    if (d.is_zero()) throw std::domain_error("RatFunc: evaluation at a pole");
    return num_.eval(z) * d.inverse();
}

int RatFunc::pole_order_at(const ExtScalar& z) const {
    Poly d = den_;
    Poly lin = Poly::linear_root(z);
    int m = 0;
    while (!d.is_zero() && d.eval(z).is_zero()) {
        d = d / lin;
        ++m;
    }
    return m;
}

RatFunc RatFunc::derivative() const {
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}
RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

ExtScalar RatFunc::residue_at(const ExtScalar& a) const {
    int m = pole_order_at(a);
    if (m == 0) return ExtScalar();
    Poly lin = Poly::linear_root(a);
    Poly q = den_;
    for (int k = 0; k < m; ++k) q = q / lin;
    // residue = (num/q)^(m-1)(a) / (m-1)!
    RatFunc g(num_, q);
    Rational fact(1);
    for (int k = 1; k < m; ++k) {
        g = g.derivative();
        fact *= Rational(k);
    }
    return g.eval(a) * ExtScalar(fact.inverse());
}

ExtScalar RatFunc::residue_at_infinity() const {
    ExtScalar sum;
    for (const auto& [root, mult] : den_.roots_in_K()) sum += residue_at(root);
    return -sum;
}

int RatFunc::order_at_infinity_as_differential() const {
    if (is_zero()) return 1 << 20;
    return den_.degree() - num_.degree() - 2;
}

std::optional<RatFunc> RatFunc::antiderivative() const {
    Poly q, r;
    Poly::divmod(num_, den_, q, r);
    // Polynomial part integrates termwise.
    std::vector<ExtScalar> pc(q.degree() + 2);
    for (int k = 0; k <= q.degree(); ++k) pc[k + 1] = q.coeff(k) * ExtScalar(Rational(1, k + 1));
    RatFunc result(Poly(std::move(pc)), Poly(ExtScalar(1)));

    if (!r.is_zero()) {
        for (const auto& [a, m] : den_.roots_in_K()) {
            Poly lin = Poly::linear_root(a);
            Poly rest = den_;
            for (int k = 0; k < m; ++k) rest = rest / lin;
            // Laurent coefficients c_j of r/den at a: c_j multiplies (z-a)^(-j).
            RatFunc g(r, rest);
            Rational fact(1);
            std::vector<ExtScalar> taylor; // g^(k)(a)/k!, k = 0..m-1
            for (int k = 0; k < m; ++k) {
                taylor.push_back(g.eval(a) * ExtScalar(fact.inverse()));
                g = g.derivative();
                fact *= Rational(k + 1);
            }
            // c_j = taylor[m-j]; j = 1 term needs a log.
            if (!taylor[m - 1].is_zero()) return std::nullopt;
            Poly pw(ExtScalar(1));
            for (int j = 2; j <= m; ++j) {
                pw = pw * lin; // (z-a)^(j-1)
                ExtScalar cj = taylor[m - j];
                if (cj.is_zero()) continue;
                // integral of c_j (z-a)^(-j) = -c_j/(j-1) (z-a)^(1-j)
                result = result + RatFunc(Poly(cj * ExtScalar(Rational(-1, j - 1))), pw);
            }
        }
    }
    return result;
}

std::string RatFunc::to_string(const std::string& var) const {
    if (is_polynomial()) return num_.to_string(var);
    return "(" + num_.to_string(var) + ") / (" + den_.to_string(var) + ")";
}

} // namespace thetarec

#include "thetarec/ext_scalar.hpp"

namespace thetarec {

namespace {

// e_j * e_k = mult_factor(j,k) * e_{index(j,k)} on the monomial basis.
// Radical part: xor of the bits, with an integer factor 2^(both sqrt2) * 3^(both sqrt3).
// Imaginary part: i*i = -1.
struct MonomialProduct {
    int index;
    int factor; // signed integer
};

MonomialProduct monomial_product(int j, int k) {
    int qj = (j >> 2) & 1, qk = (k >> 2) & 1;
    int rj = j & 3, rk = k & 3;
    int factor = 1;
    if ((rj & rk) & 1) factor *= 2;
    if ((rj & rk) & 2) factor *= 3;
    if (qj & qk) factor = -factor;
    return {((qj ^ qk) << 2) | (rj ^ rk), factor};
}

} // namespace

ExtScalar operator*(const ExtScalar& a, const ExtScalar& b) {
    ExtScalar r;
    for (int j = 0; j < ExtScalar::kDim; ++j) {
        if (a.c_[j].is_zero()) continue;
        for (int k = 0; k < ExtScalar::kDim; ++k) {
            if (b.c_[k].is_zero()) continue;
            auto [idx, f] = monomial_product(j, k);
            Rational term = a.c_[j] * b.c_[k];
            if (f != 1) term *= Rational(f);
            r.c_[idx] += term;
        }
    }
    return r;
}

ExtScalar ExtScalar::inverse() const {
    if (is_zero()) throw std::domain_error("ExtScalar: inverse of zero");
    // Norm down the tower Q(i,sqrt2,sqrt3) -> Q(sqrt2,sqrt3) -> Q(sqrt3) -> Q.
    ExtScalar n1 = conj();                    // z * conj(z) is real
    ExtScalar p1 = *this * n1;
    ExtScalar n2 = p1.conj_sqrt2();
    ExtScalar p2 = p1 * n2;                   // now in Q(sqrt3)
    ExtScalar n3 = p2.conj_sqrt3();
    ExtScalar p3 = p2 * n3;                   // now in Q
    Rational norm = p3.as_rational();
    if (norm.is_zero()) throw std::domain_error("ExtScalar: inverse of zero");
    ExtScalar r = n1 * n2 * n3;
    Rational inv = norm.inverse();
    for (int k = 0; k < kDim; ++k) r.c_[k] *= inv;
    return r;
}

const char* ExtScalar::basis_name(int k) {
    static const char* names[kDim] = {"1", "sqrt2", "sqrt3", "sqrt6",
                                      "i", "i*sqrt2", "i*sqrt3", "i*sqrt6"};
    return names[k];
}

std::string ExtScalar::to_string() const {
    std::string s;
    for (int k = 0; k < kDim; ++k) {
        if (c_[k].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += c_[k].to_string();
        if (k > 0) s += std::string("*") + basis_name(k);
    }
    return s.empty() ? "0" : s;
}

std::optional<ExtScalar> sqrt_in_field(const ExtScalar& a) {
    if (a.is_zero()) return ExtScalar();
    // Candidates s = r * e_k: s^2 = r^2 * e_k^2 where e_k^2 is the rational
    // 1, 2, 3, 6, -1, -2, -3 or -6.  A representable input must be rational
    // after division by one of those squares, with a rational square root.
    static const int basis_square[ExtScalar::kDim] = {1, 2, 3, 6, -1, -2, -3, -6};
    for (int k = 0; k < ExtScalar::kDim; ++k) {
        ExtScalar q = a / ExtScalar(Rational(basis_square[k]));
        if (!q.is_rational()) continue;
        Rational root;
        if (!q.rational_part().sqrt_exact(root)) continue;
        ExtScalar s = ExtScalar::basis(k, root);
        // Deterministic branch: flip so the first nonzero coordinate is positive.
        if (root.sign() < 0) s = -s;
        return s;
    }
    return std::nullopt;
}

} // namespace thetarec

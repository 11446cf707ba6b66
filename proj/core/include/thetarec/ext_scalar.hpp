#pragma once

#include "thetarec/rational.hpp"

#include <array>
#include <optional>
#include <string>

namespace thetarec {

/// Element of K = Q(i, sqrt2, sqrt3), the coefficient field of the library.
///
/// Coordinates over the fixed Q-basis
///   { 1, sqrt2, sqrt3, sqrt6, i, i*sqrt2, i*sqrt3, i*sqrt6 }.
/// Index layout: bit 2 selects the imaginary half, bits 0/1 select the
/// sqrt2 / sqrt3 factors, so e[q*4 + r] = i^q * sqrt2^(r&1) * sqrt3^(r>>1).
class ExtScalar {
public:
    static constexpr int kDim = 8;

    ExtScalar() = default;
    ExtScalar(long long n) { c_[0] = Rational(n); }
    ExtScalar(const Rational& r) { c_[0] = r; }

    static ExtScalar basis(int index, Rational coeff = Rational(1)) {
        ExtScalar s;
        s.c_[index] = std::move(coeff);
        return s;
    }
    static ExtScalar sqrt2() { return basis(1); }
    static ExtScalar sqrt3() { return basis(2); }
    static ExtScalar sqrt6() { return basis(3); }
    static ExtScalar i() { return basis(4); }
    /// sqrt(-3) with the branch i*sqrt3 used throughout the A2 curves.
    static ExtScalar sqrt_minus3() { return basis(6); }

    const Rational& coord(int k) const { return c_[k]; }
    Rational& coord(int k) { return c_[k]; }

    bool is_zero() const {
        for (const auto& x : c_) if (!x.is_zero()) return false;
        return true;
    }
    bool is_rational() const {
        for (int k = 1; k < kDim; ++k) if (!c_[k].is_zero()) return false;
        return true;
    }
    const Rational& rational_part() const { return c_[0]; }

    /// Throws unless the value lies in Q.
    Rational as_rational() const {
        if (!is_rational()) throw std::domain_error("ExtScalar: value is not rational: " + to_string());
        return c_[0];
    }

    ExtScalar operator-() const {
        ExtScalar r;
        for (int k = 0; k < kDim; ++k) r.c_[k] = -c_[k];
        return r;
    }

    friend ExtScalar operator+(const ExtScalar& a, const ExtScalar& b) {
        ExtScalar r;
        for (int k = 0; k < kDim; ++k) r.c_[k] = a.c_[k] + b.c_[k];
        return r;
    }
    friend ExtScalar operator-(const ExtScalar& a, const ExtScalar& b) {
        ExtScalar r;
        for (int k = 0; k < kDim; ++k) r.c_[k] = a.c_[k] - b.c_[k];
        return r;
    }
    friend ExtScalar operator*(const ExtScalar& a, const ExtScalar& b);
    friend ExtScalar operator/(const ExtScalar& a, const ExtScalar& b) { return a * b.inverse(); }

    ExtScalar& operator+=(const ExtScalar& o) { return *this = *this + o; }
    ExtScalar& operator-=(const ExtScalar& o) { return *this = *this - o; }
    ExtScalar& operator*=(const ExtScalar& o) { return *this = *this * o; }
    ExtScalar& operator/=(const ExtScalar& o) { return *this = *this / o; }

    /// Multiplicative inverse.  Throws on zero.
    ExtScalar inverse() const;

    /// Complex conjugation i -> -i.
    ExtScalar conj() const { return galois(true, false, false); }
    /// The Galois involutions sqrt2 -> -sqrt2 and sqrt3 -> -sqrt3.
    ExtScalar conj_sqrt2() const { return galois(false, true, false); }
    ExtScalar conj_sqrt3() const { return galois(false, false, true); }

    friend bool operator==(const ExtScalar& a, const ExtScalar& b) { return a.c_ == b.c_; }
    friend bool operator!=(const ExtScalar& a, const ExtScalar& b) { return !(a == b); }

    /// Total order used only for deterministic container layouts.
    friend bool operator<(const ExtScalar& a, const ExtScalar& b) {
        for (int k = 0; k < kDim; ++k) {
            if (a.c_[k] != b.c_[k]) return a.c_[k] < b.c_[k];
        }
        return false;
    }

    std::string to_string() const;

    static const char* basis_name(int k);

private:
    ExtScalar galois(bool flip_i, bool flip_s2, bool flip_s3) const {
        ExtScalar r;
        for (int k = 0; k < kDim; ++k) {
            bool neg = (flip_i && (k & 4)) ^ (flip_s2 && (k & 1)) ^ (flip_s3 && (k & 2));
            r.c_[k] = neg ? -c_[k] : c_[k];
        }
        return r;
    }

    std::array<Rational, kDim> c_{};
};

/// Square root inside K if one exists with the library's deterministic branch
/// rule (first nonzero coordinate positive in basis order), otherwise nullopt.
/// Covers values of the form q * b for a rational q and basis monomial b,
/// which includes every second derivative x''(z_i) arising in the shipped
/// curves.
std::optional<ExtScalar> sqrt_in_field(const ExtScalar& a);

} // namespace thetarec

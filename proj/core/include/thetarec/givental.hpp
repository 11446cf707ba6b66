#pragma once

#include "thetarec/spectral_curve.hpp"

namespace thetarec {

using Mat = std::vector<std::vector<ExtScalar>>;

Mat mat_identity(int n);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);
Mat mat_transpose(const Mat& a);
Mat mat_scaled(const Mat& a, const ExtScalar& c);
std::vector<ExtScalar> mat_apply(const Mat& a, const std::vector<ExtScalar>& v);
bool mat_is_zero(const Mat& a);

/// Matrix power series R(z) = R_0 + R_1 z + ... with R_0 = I.
struct MatrixSeries {
    int size = 0;
    std::vector<Mat> coeff; // coeff[m] multiplies z^m

    int order() const { return (int)coeff.size() - 1; }
    const Mat& at(int m) const { return coeff[m]; }

    static MatrixSeries identity(int n, int order);
    MatrixSeries inverse() const;
    /// R(-z)
    MatrixSeries negated_variable() const;
    MatrixSeries transpose() const;
    friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b);
    std::vector<std::vector<ExtScalar>> apply(const std::vector<ExtScalar>& v) const; // per order
};

/// Vector power series: translation data T0(z) = 1 - R^-1(z) 1.
struct TranslationSeries {
    std::vector<std::vector<ExtScalar>> coeff; // coeff[m] is the z^m vector
    int order() const { return (int)coeff.size() - 1; }
};

/// Frobenius point data used by the fixtures (the A2 point (u1,u2) = (2,-2)).
struct FrobeniusPointData {
    int size = 0;
    std::vector<ExtScalar> u;          // canonical coordinates (diagonal of U)
    Mat v;                             // skew matrix V
    std::vector<ExtScalar> delta;      // canonical metric values
    std::vector<ExtScalar> sqrt_delta; // unit vector in normalized canonical basis
    Mat psi;                           // flat -> normalized canonical transition
    Mat eta;                           // flat metric

    void validate() const; // V skew, psi^T psi = eta, sqrt_delta^2 = delta
    static FrobeniusPointData a2();
};

/// Laplace transform of the Bergman kernel evaluations: R^-1(z)^i_j from the
/// even part of the expansion of B(P_j, .) in the frame at P_i, by the term
/// rules  s^-2 ds -> 1  and  b_{2m} s^{2m} ds -> -(2m-1)!! b_{2m} z^{m+1}.
/// Returns (Rinv, R).
std::pair<MatrixSeries, MatrixSeries> laplace_bergman(const AnalyzedCurve& curve, int order);

/// R(z) R(-z)^T == I up to the series order.
bool twisted_loop_check(const MatrixSeries& r);

struct LaplaceDyData {
    std::vector<ExtScalar> unit;               // dy(P_i), or the z^-1 data at irregular points
    std::vector<std::vector<ExtScalar>> series; // series[i][m] = z^m coefficient (m shifted by pole for irregular)
    std::vector<int> lowest;                    // lowest z-power per point (0 regular, -1 irregular)
    TranslationSeries t0;                       // 1 - R^-1(z) 1
    bool matches_r_action = false;              // series == z^pole * R^-1(z) unit
};

/// Laplace transform of dy in every frame by the rules
/// c_{2m} s^{2m} ds -> (2m-1)!! c_{2m} z^m  and  c_{-2} s^-2 ds -> -c_{-2} z^-1.
LaplaceDyData laplace_dy(const AnalyzedCurve& curve, const MatrixSeries& rinv, int order);

/// [R_{k+1}, U] == (k + V) R_k for k < order (the flatness recursion).
bool ode_check(const MatrixSeries& r, const std::vector<ExtScalar>& u_diag, const Mat& v);

/// Edge weight E(w,z) = (I - R^-1(z) R^-1(w)^T)/(w+z); E[a][b] multiplies
/// w^a z^b, computed for a+b <= order-1 with the exact-division remainder
/// certified to vanish.
std::vector<std::vector<Mat>> edge_weight(const MatrixSeries& rinv, int order);

/// Coefficient-wise check of the Laplace-transformed Bergman kernel identity
/// Bcheck^{ij}(z1,z2) = -sum_k R^-1(z1)^k_i R^-1(z2)^k_j / (z1+z2), with the
/// diagonal singular part regularized to -1/(z1+z2).
bool bergman_laplace_identity_check(const AnalyzedCurve& curve, const MatrixSeries& rinv, int order);

} // namespace thetarec

#include "thetarec/givental.hpp"

namespace thetarec {

Mat mat_identity(int n) {
    Mat m(n, std::vector<ExtScalar>(n));
    for (int i = 0; i < n; ++i) m[i][i] = ExtScalar(1);
    return m;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    int n = (int)a.size(), p = (int)b[0].size(), q = (int)b.size();
    Mat m(n, std::vector<ExtScalar>(p));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < q; ++k) {
            if (a[i][k].is_zero()) continue;
            for (int j = 0; j < p; ++j) m[i][j] += a[i][k] * b[k][j];
        }
    return m;
}

Mat mat_add(const Mat& a, const Mat& b) {
    Mat m = a;
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) m[i][j] += b[i][j];
    return m;
}

Mat mat_sub(const Mat& a, const Mat& b) {
    Mat m = a;
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) m[i][j] -= b[i][j];
    return m;
}

Mat mat_transpose(const Mat& a) {
    Mat m(a[0].size(), std::vector<ExtScalar>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) m[j][i] = a[i][j];
    return m;
}

Mat mat_scaled(const Mat& a, const ExtScalar& c) {
    Mat m = a;
    for (auto& row : m)
        for (auto& x : row) x *= c;
    return m;
}

std::vector<ExtScalar> mat_apply(const Mat& a, const std::vector<ExtScalar>& v) {
    std::vector<ExtScalar> out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

bool mat_is_zero(const Mat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

MatrixSeries MatrixSeries::identity(int n, int order) {
    MatrixSeries s;
    s.size = n;
    s.coeff.assign(order + 1, Mat(n, std::vector<ExtScalar>(n)));
    s.coeff[0] = mat_identity(n);
    return s;
}

MatrixSeries MatrixSeries::inverse() const {
    if (!mat_is_zero(mat_sub(coeff[0], mat_identity(size))))
        throw std::domain_error("MatrixSeries: inversion requires R_0 = I");
    MatrixSeries out = identity(size, order());
    for (int m = 1; m <= order(); ++m) {
        Mat acc(size, std::vector<ExtScalar>(size));
        for (int j = 1; j <= m; ++j) acc = mat_add(acc, mat_mul(coeff[j], out.coeff[m - j]));
        out.coeff[m] = mat_scaled(acc, ExtScalar(Rational(-1)));
    }
    return out;
}

MatrixSeries MatrixSeries::negated_variable() const {
    MatrixSeries out = *this;
    for (int m = 1; m <= order(); m += 2) out.coeff[m] = mat_scaled(out.coeff[m], ExtScalar(Rational(-1)));
    return out;
}

MatrixSeries MatrixSeries::transpose() const {
    MatrixSeries out = *this;
    for (auto& m : out.coeff) m = mat_transpose(m);
    return out;
}

MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
    MatrixSeries out;
    out.size = a.size;
    int order = std::min(a.order(), b.order());
    out.coeff.assign(order + 1, Mat(a.size, std::vector<ExtScalar>(a.size)));
    for (int m = 0; m <= order; ++m)
        for (int j = 0; j <= m; ++j)
            out.coeff[m] = mat_add(out.coeff[m], mat_mul(a.coeff[j], b.coeff[m - j]));
    return out;
}

std::vector<std::vector<ExtScalar>> MatrixSeries::apply(const std::vector<ExtScalar>& v) const {
    std::vector<std::vector<ExtScalar>> out;
    for (const Mat& m : coeff) out.push_back(mat_apply(m, v));
    return out;
}

void FrobeniusPointData::validate() const {
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (v[i][j] + v[j][i] != ExtScalar())
                throw std::logic_error("FrobeniusPointData: V must be skew-symmetric");
    Mat psitpsi = mat_mul(mat_transpose(psi), psi);
    if (!mat_is_zero(mat_sub(psitpsi, eta)))
        throw std::logic_error("FrobeniusPointData: psi^T psi != eta");
    for (int i = 0; i < size; ++i)
        if (sqrt_delta[i] * sqrt_delta[i] != delta[i])
            throw std::logic_error("FrobeniusPointData: unit coordinates must square to Delta");
}

FrobeniusPointData FrobeniusPointData::a2() {
    FrobeniusPointData d;
    d.size = 2;
    d.u = {ExtScalar(2), ExtScalar(-2)};
    ExtScalar i6 = ExtScalar::basis(4, Rational(1, 6)); // i/6
    d.v = {{ExtScalar(), i6}, {-i6, ExtScalar()}};
    d.delta = {ExtScalar(Rational(1, 2)), ExtScalar(Rational(-1, 2))};
    ExtScalar inv_sqrt2 = ExtScalar::basis(1, Rational(1, 2));     // sqrt2/2 = 1/sqrt2
    ExtScalar i_inv_sqrt2 = ExtScalar::basis(5, Rational(1, 2));   // i/sqrt2
    d.sqrt_delta = {inv_sqrt2, i_inv_sqrt2};
    d.psi = {{inv_sqrt2, inv_sqrt2}, {i_inv_sqrt2, -i_inv_sqrt2}};
    d.eta = {{ExtScalar(), ExtScalar(1)}, {ExtScalar(1), ExtScalar()}};
    d.validate();
    return d;
}

std::pair<MatrixSeries, MatrixSeries> laplace_bergman(const AnalyzedCurve& curve, int order) {
    int n = curve.num_points();
    MatrixSeries rinv = MatrixSeries::identity(n, order);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const LaurentSeries& e = curve.basis_expansion(i, j, 0);
            if (i == j && e.coeff(-2) != ExtScalar(1))
                throw std::logic_error("laplace_bergman: diagonal expansion must start s^-2");
            for (int m = 1; m <= order; ++m) {
                // z^m picks up the s^{2m-2} coefficient with weight -(2m-3)!!.
                ExtScalar b = e.coeff(2 * m - 2);
                rinv.coeff[m][i][j] = -(b * ExtScalar(double_factorial_odd(m - 1)));
            }
        }
    }
    MatrixSeries r = rinv.inverse();
    return {std::move(rinv), std::move(r)};
}

bool twisted_loop_check(const MatrixSeries& r) {
    MatrixSeries prod = r * r.negated_variable().transpose();
    for (int m = 0; m <= prod.order(); ++m) {
        Mat expect = m == 0 ? mat_identity(r.size) : Mat(r.size, std::vector<ExtScalar>(r.size));
        if (!mat_is_zero(mat_sub(prod.coeff[m], expect))) return false;
    }
    return true;
}

LaplaceDyData laplace_dy(const AnalyzedCurve& curve, const MatrixSeries& rinv, int order) {
    int n = curve.num_points();
    LaplaceDyData out;
    out.unit.resize(n);
    out.series.resize(n);
    out.lowest.resize(n);
    for (int i = 0; i < n; ++i) {
        LaurentSeries dy = curve.frame_y(i).derivative();
        if (dy.lo() < -2)
            throw std::logic_error("laplace_dy: dy has a pole of order > 2 in the frame");
        if (dy.lo() <= -1 && !dy.coeff(-1).is_zero())
            throw std::logic_error("laplace_dy: dy has a nonzero residue at a critical point");
        bool irregular = curve.point(i).irregular;
        out.lowest[i] = irregular ? -1 : 0;
        ExtScalar cm2 = dy.lo() <= -2 ? dy.coeff(-2) : ExtScalar();
        out.unit[i] = irregular ? -cm2 : dy.coeff(0);
        std::vector<ExtScalar> ser;
        if (irregular) ser.push_back(-cm2); // z^-1 coefficient
        for (int m = 0; m <= order; ++m)
            ser.push_back(dy.coeff(2 * m) * ExtScalar(double_factorial_odd(m)));
        out.series[i] = std::move(ser);
    }

    // T0(z) = unit - R^-1(z) unit.
    auto rv = rinv.apply(out.unit);
    out.t0.coeff.assign(rv.size(), std::vector<ExtScalar>(n));
    for (size_t m = 0; m < rv.size(); ++m)
        for (int i = 0; i < n; ++i)
            out.t0.coeff[m][i] = (m == 0 ? out.unit[i] : ExtScalar()) - rv[m][i];

    // Does the Laplace transform equal z^lowest * (R^-1(z) unit)?  The stored
    // series starts at z^lowest, so index m lines up with order m of R^-1 unit.
    out.matches_r_action = true;
    for (int i = 0; i < n && out.matches_r_action; ++i) {
        for (int m = 0; m < (int)out.series[i].size() && m <= rinv.order(); ++m) {
            if (out.series[i][m] != rv[m][i]) { out.matches_r_action = false; break; }
        }
    }
    return out;
}

bool ode_check(const MatrixSeries& r, const std::vector<ExtScalar>& u_diag, const Mat& v) {
    int n = r.size;
    Mat u(n, std::vector<ExtScalar>(n));
    for (int i = 0; i < n; ++i) u[i][i] = u_diag[i];
    for (int k = 0; k + 1 <= r.order(); ++k) {
        Mat lhs = mat_sub(mat_mul(r.at(k + 1), u), mat_mul(u, r.at(k + 1)));
        Mat kv = v;
        for (int i = 0; i < n; ++i) kv[i][i] += ExtScalar(Rational(k));
        Mat rhs = mat_mul(kv, r.at(k));
        if (!mat_is_zero(mat_sub(lhs, rhs))) return false;
    }
    return true;
}

std::vector<std::vector<Mat>> edge_weight(const MatrixSeries& rinv, int order) {
    int n = rinv.size;
    if (rinv.order() < order + 1)
        throw std::invalid_argument("edge_weight: R^-1 must be supplied to order+1");
    auto nmat = [&](int a, int b) { // [w^a z^b] (I - R^-1(z) R^-1(w)^T)
        Mat m = mat_scaled(mat_mul(rinv.at(b), mat_transpose(rinv.at(a))), ExtScalar(Rational(-1)));
        if (a == 0 && b == 0) m = mat_add(m, mat_identity(n));
        return m;
    };
    Mat zero(n, std::vector<ExtScalar>(n));
    std::vector<std::vector<Mat>> e(order + 1, std::vector<Mat>(order + 1, zero));
    for (int b = 0; b <= order; ++b) {
        for (int a = 0; a + b <= order; ++a) {
            Mat val = nmat(a + 1, b);
            if (b >= 1 && a + 1 + b - 1 <= order + 1) val = mat_sub(val, e[a + 1][b - 1]);
            e[a][b] = std::move(val);
        }
    }
    // Remainder certificate: [w^0 z^b] N == E_{0, b-1}.
    for (int b = 1; b <= order + 1; ++b) {
        Mat expect = b - 1 <= order ? e[0][b - 1] : zero;
        if (!mat_is_zero(mat_sub(nmat(0, b), expect)))
            throw std::domain_error("edge_weight: (w+z) does not divide the numerator; R is not in the twisted loop group");
    }
    if (!mat_is_zero(nmat(0, 0)))
        throw std::domain_error("edge_weight: numerator constant term must vanish");
    return e;
}

namespace {

/// Dense 2-variable series over a square window, coefficient of s^a t^b at
/// [a][b] with an offset for Laurent parts.
struct BiSeries {
    int lo;        // exponents run from lo..lo+size-1 in each variable
    std::vector<std::vector<ExtScalar>> c;

    ExtScalar at(int a, int b) const {
        int i = a - lo, j = b - lo;
        if (i < 0 || j < 0 || i >= (int)c.size() || j >= (int)c.size()) return ExtScalar();
        return c[i][j];
    }
};

} // namespace

bool bergman_laplace_identity_check(const AnalyzedCurve& curve, const MatrixSeries& rinv, int order) {
    int n = curve.num_points();
    int window = 2 * order + 4;

    // Numerator series M(z1, z2)_{ij} = delta_ij - sum_k R^-1(z1)_{ik} R^-1(z2)_{jk}
    // (rows of R^-1 are frames, columns evaluation points), divided by z1+z2.
    // q[a][b] = [z1^a z2^b] of the quotient.
    if (rinv.order() < order + 1)
        throw std::invalid_argument("bergman_laplace_identity_check: R^-1 must be supplied to order+1");
    auto mnum = [&](int a, int b) {
        Mat m = mat_scaled(mat_mul(rinv.at(a), mat_transpose(rinv.at(b))), ExtScalar(Rational(-1)));
        if (a == 0 && b == 0) m = mat_add(m, mat_identity(n));
        return m;
    };
    Mat zero(n, std::vector<ExtScalar>(n));
    std::vector<std::vector<Mat>> q(order + 1, std::vector<Mat>(order + 1, zero));
    for (int b = 0; b <= order; ++b)
        for (int a = 0; a + b <= order; ++a) {
            Mat val = mnum(a + 1, b);
            if (b >= 1) val = mat_sub(val, q[a + 1][b - 1]);
            q[a][b] = std::move(val);
        }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // Double expansion of B(z_i(s), z_j(t)) / (ds dt), minus the
            // diagonal singular part when i == j.
            const LaurentSeries& zi = curve.frame_z(i);
            const LaurentSeries& zj = curve.frame_z(j);
            const LaurentSeries& dzi = curve.frame_dz(i);
            const LaurentSeries& dzj = curve.frame_dz(j);

            auto coeff_of = [&](const LaurentSeries& s, int k) {
                return (k >= s.lo() && k <= s.order()) ? s.coeff(k) : ExtScalar();
            };

            int w = window;
            BiSeries diff{0, std::vector<std::vector<ExtScalar>>(w, std::vector<ExtScalar>(w))};
            for (int a = 0; a < w; ++a)
                for (int b = 0; b < w; ++b) {
                    ExtScalar v;
                    if (a == 0 && b == 0) v = curve.point(i).location - curve.point(j).location;
                    v += (b == 0 ? coeff_of(zi, a) - (a == 0 ? curve.point(i).location : ExtScalar()) : ExtScalar());
                    diff.c[a][b] = v;
                }
            // diff = z_i(s) - z_j(t): subtract t-part.
            for (int b = 1; b < w; ++b) diff.c[0][b] -= coeff_of(zj, b);

            // f(s,t) = dz_i(s) dz_j(t); g = f; target B = f / diff^2.
            // Work with the identity B*diff^2 = f to solve B as a double series.
            // For i == j, first factor diff = (s - t) h and use
            // B - 1/(s-t)^2 = (f/h^2 - 1)/(s-t)^2.
            auto mul = [&](const BiSeries& x, const BiSeries& y) {
                BiSeries r{x.lo + y.lo, std::vector<std::vector<ExtScalar>>(w, std::vector<ExtScalar>(w))};
                for (int a = 0; a < w; ++a)
                    for (int b = 0; b < w; ++b) {
                        ExtScalar acc;
                        for (int p = 0; p <= a; ++p)
                            for (int qq = 0; qq <= b; ++qq) {
                                const ExtScalar& xa = x.c[p][qq];
                                if (xa.is_zero()) continue;
                                acc += xa * y.c[a - p][b - qq];
                            }
                        r.c[a][b] = acc;
                    }
                return r;
            };
            auto divide = [&](const BiSeries& num, const BiSeries& den) {
                // den must have den.c[0][0] != 0
                BiSeries r{num.lo - den.lo, std::vector<std::vector<ExtScalar>>(w, std::vector<ExtScalar>(w))};
                ExtScalar inv = den.c[0][0].inverse();
                for (int a = 0; a < w; ++a)
                    for (int b = 0; b < w; ++b) {
                        ExtScalar acc = num.c[a][b];
                        for (int p = 0; p <= a; ++p)
                            for (int qq = 0; qq <= b; ++qq) {
                                if (p == 0 && qq == 0) continue;
                                const ExtScalar& d = den.c[p][qq];
                                if (d.is_zero()) continue;
                                acc -= d * r.c[a - p][b - qq];
                            }
                        r.c[a][b] = acc * inv;
                    }
                return r;
            };
            auto divide_s_minus_t = [&](const BiSeries& g) {
                // g = (s-t) h; g must vanish on the diagonal.
                BiSeries h{g.lo, std::vector<std::vector<ExtScalar>>(w, std::vector<ExtScalar>(w))};
                // [s^a t^b] g = h[a-1][b] - h[a][b-1]; solve by increasing b.
                for (int b = 0; b < w; ++b)
                    for (int a = 0; a + 1 < w; ++a) {
                        ExtScalar val = g.c[a + 1][b];
                        if (b >= 1) val += h.c[a + 1][b - 1];
                        h.c[a][b] = val;
                    }
                return h;
            };

            BiSeries f{0, std::vector<std::vector<ExtScalar>>(w, std::vector<ExtScalar>(w))};
            for (int a = 0; a < w; ++a)
                for (int b = 0; b < w; ++b) f.c[a][b] = coeff_of(dzi, a) * coeff_of(dzj, b);

            BiSeries breg{0, {}};
            if (i != j) {
                BiSeries d2 = mul(diff, diff);
                breg = divide(f, d2);
            } else {
                BiSeries h = divide_s_minus_t(diff);
                BiSeries h2 = mul(h, h);
                BiSeries ratio = divide(f, h2);
                ratio.c[0][0] -= ExtScalar(1);
                BiSeries once = divide_s_minus_t(ratio);
                breg = divide_s_minus_t(once);
            }

            // Laplace both variables: s^{2a} t^{2b} -> (2a-1)!! (2b-1)!! z1^a z2^b;
            // compare with q[b][a][i][j]... the quotient was indexed [z1^a z2^b].
            for (int a = 0; a + 1 <= order; ++a) {
                for (int b = 0; a + b <= order - 1; ++b) {
                    ExtScalar lhs = breg.at(2 * a, 2 * b) *
                                    ExtScalar(double_factorial_odd(a) * double_factorial_odd(b));
                    ExtScalar rhs = q[a][b][i][j];
                    if (lhs != rhs) return false;
                }
            }
        }
    }
    return true;
}

} // namespace thetarec

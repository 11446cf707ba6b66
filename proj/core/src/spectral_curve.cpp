#include "thetarec/spectral_curve.hpp"

#include <algorithm>

namespace thetarec {

namespace {

Poly poly_from(std::initializer_list<ExtScalar> coeffs) {
    return Poly(std::vector<ExtScalar>(coeffs));
}

} // namespace

SpectralCurve SpectralCurve::airy() {
    SpectralCurve c;
    c.x = RatFunc(poly_from({ExtScalar(0), ExtScalar(0), ExtScalar(Rational(1, 2))}), Poly(ExtScalar(1)));
    c.y = RatFunc::variable();
    c.name = "airy";
    return c;
}

SpectralCurve SpectralCurve::bessel() {
    SpectralCurve c;
    c.x = RatFunc(poly_from({ExtScalar(0), ExtScalar(0), ExtScalar(Rational(1, 2))}), Poly(ExtScalar(1)));
    c.y = RatFunc(Poly(ExtScalar(1)), Poly::monomial(1));
    c.name = "bessel";
    return c;
}

SpectralCurve SpectralCurve::a2() {
    SpectralCurve c;
    c.x = RatFunc(poly_from({ExtScalar(0), ExtScalar(-3), ExtScalar(0), ExtScalar(1)}), Poly(ExtScalar(1)));
    c.y = RatFunc(Poly::monomial(1, ExtScalar::sqrt_minus3()), Poly(ExtScalar(1)));
    c.name = "a2";
    return c;
}

SpectralCurve SpectralCurve::bgw_a2() {
    SpectralCurve c;
    c.x = RatFunc(poly_from({ExtScalar(0), ExtScalar(-3), ExtScalar(0), ExtScalar(1)}), Poly(ExtScalar(1)));
    c.y = RatFunc(Poly(ExtScalar::sqrt_minus3()), poly_from({ExtScalar(-3), ExtScalar(0), ExtScalar(3)}));
    c.name = "bgw-a2";
    return c;
}

SpectralCurve SpectralCurve::builtin(const std::string& name) {
    if (name == "airy") return airy();
    if (name == "bessel") return bessel();
    if (name == "a2") return a2();
    if (name == "bgw-a2") return bgw_a2();
    throw std::invalid_argument("unknown built-in curve: " + name +
                                " (expected airy | bessel | a2 | bgw-a2)");
}

AnalyzedCurve::AnalyzedCurve(SpectralCurve curve, int frame_order)
    : curve_(std::move(curve)), order_(frame_order) {
    if (order_ < 8) order_ = 8;
    const RatFunc& x = curve_.x;
    const RatFunc& y = curve_.y;
    if (x.num().degree() < 1) throw std::invalid_argument("spectral curve: x must be non-constant");

    RatFunc xp = x.derivative();
    auto roots = xp.num().roots_in_K();
    std::vector<ExtScalar> locations;
    for (const auto& [z0, mult] : roots) {
        if (!x.has_pole_at(z0)) {
            if (mult > 1)
                throw std::invalid_argument("spectral curve: dx has a non-simple zero at z = " + z0.to_string());
            locations.push_back(z0);
        }
    }
    if (locations.empty()) throw std::invalid_argument("spectral curve: dx has no zeros");
    std::sort(locations.begin(), locations.end());

    RatFunc xpp = xp.derivative();
    for (const ExtScalar& z0 : locations) {
        CriticalPoint cp;
        cp.index = (int)points_.size();
        cp.location = z0;
        cp.value = x.eval(z0);
        ExtScalar d2 = xpp.eval(z0);
        if (d2.is_zero())
            throw std::invalid_argument("spectral curve: x''(z) vanishes at the critical point z = " + z0.to_string());

        const ExtScalar* override_s1 = nullptr;
        for (const auto& [at, s1] : curve_.branch_overrides) {
            if (at == z0) { override_s1 = &s1; break; }
        }
        if (override_s1) {
            if (*override_s1 * *override_s1 != d2)
                throw std::invalid_argument("spectral curve: branch override at z = " + z0.to_string() +
                                            " does not square to x''");
            cp.branch_s1 = *override_s1;
        } else {
            auto s1 = sqrt_in_field(d2);
            if (!s1)
                throw std::invalid_argument("spectral curve: x''(" + z0.to_string() + ") = " + d2.to_string() +
                                            " has no square root in K; supply a branch override");
            cp.branch_s1 = *s1;
        }

        int ypole = y.pole_order_at(z0);
        if (ypole > 1)
            throw std::invalid_argument("spectral curve: y must be regular or have a simple pole at z = " +
                                        z0.to_string());
        cp.irregular = (ypole == 1);
        points_.push_back(cp);
    }

    // Local frames: s(t) = sqrt(2 (x(z_i + t) - u_i)) with leading coefficient
    // branch_s1, then z(s) = z_i + reversion.
    for (const CriticalPoint& cp : points_) {
        Frame fr;
        LaurentSeries xloc = expand_ratfunc(x, cp.location, order_ + 2);
        LaurentSeries shifted = xloc - LaurentSeries::monomial(cp.value, 0, xloc.order());
        LaurentSeries s_of_t = (shifted * ExtScalar(Rational(2))).sqrt(&cp.branch_s1);
        LaurentSeries w = s_of_t.reversion().truncated(order_);
        fr.z_of_s = w + LaurentSeries::monomial(cp.location, 0, w.order());
        fr.dz_ds = fr.z_of_s.derivative();
        fr.y_of_s = compose_ratfunc(y, fr.z_of_s);
        LaurentSeries denom = (fr.y_of_s.negate_variable() - fr.y_of_s) * LaurentSeries::variable(fr.y_of_s.order());
        if (denom.is_zero_known())
            throw std::invalid_argument("spectral curve: y(p) - y(p-hat) vanishes identically at z = " +
                                        cp.location.to_string());
        int dval = denom.valuation();
        int expected = cp.irregular ? 0 : 2;
        if (dval != expected)
            throw std::invalid_argument("spectral curve: recursion kernel denominator has valuation " +
                                        std::to_string(dval) + " at z = " + cp.location.to_string() +
                                        ", expected " + std::to_string(expected));
        fr.inv_denom = denom.inverse();

        // Frame invariant: x(z(s)) - u - s^2/2 vanishes to the guaranteed order.
        LaurentSeries check = compose_ratfunc(x, fr.z_of_s) -
                              LaurentSeries::monomial(cp.value, 0, order_) -
                              LaurentSeries::monomial(ExtScalar(Rational(1, 2)), 2, order_);
        if (!check.is_zero_known())
            throw std::logic_error("spectral curve: frame construction failed the defining identity at z = " +
                                   cp.location.to_string());
        frames_.push_back(std::move(fr));
    }
}

bool AnalyzedCurve::any_irregular() const {
    for (const auto& p : points_) if (p.irregular) return true;
    return false;
}

int AnalyzedCurve::k_bound(int i, int g, int n) const {
    int pole = points_[i].irregular ? 2 * g : 6 * g - 4 + 2 * n;
    return std::max(0, pole / 2 - 1);
}

const LaurentSeries& AnalyzedCurve::delta_power(int i, int m) const {
    Frame& fr = const_cast<Frame&>(frames_[i]);
    {
        std::shared_lock lk(mtx_);
        if ((int)fr.delta_pow.size() > m && m >= 1) return fr.delta_pow[m];
    }
    std::unique_lock lk(mtx_);
    if (fr.delta_pow.empty()) {
        LaurentSeries delta = fr.z_of_s - LaurentSeries::monomial(points_[i].location, 0, fr.z_of_s.order());
        fr.delta_pow.push_back(LaurentSeries::monomial(ExtScalar(1), 0, delta.order())); // m = 0
        fr.delta_pow.push_back(delta);
    }
    while ((int)fr.delta_pow.size() <= m)
        fr.delta_pow.push_back(fr.delta_pow.back() * fr.delta_pow[1]);
    return fr.delta_pow[m];
}

RatFunc AnalyzedCurve::eta_form(int i, int k) const {
    // eta_k = sum_{j=1}^{2k+1} ([s^{2k+1}] delta^j) (z - z_i)^{-(j+1)}
    const ExtScalar& z0 = points_[i].location;
    Poly lin = Poly::linear_root(z0);
    Poly num;
    Poly pw(ExtScalar(1)); // (z-z0)^(2k+1-j) built downward
    std::vector<ExtScalar> cj(2 * k + 2);
    for (int j = 1; j <= 2 * k + 1; ++j) cj[j] = delta_power(i, j).coeff(2 * k + 1);
    for (int j = 2 * k + 1; j >= 1; --j) {
        num = num + Poly(cj[j]) * pw;
        pw = pw * lin;
    }
    Poly den(ExtScalar(1));
    for (int j = 0; j < 2 * k + 2; ++j) den = den * lin;
    return RatFunc(num, den);
}

const RatFunc& AnalyzedCurve::basis_form(int i, int k) const {
    {
        std::shared_lock lk(mtx_);
        auto it = basis_cache_.find({i, k});
        if (it != basis_cache_.end()) return it->second;
    }
    RatFunc form = eta_form(i, k) * ExtScalar(double_factorial_odd(k + 1));
    std::unique_lock lk(mtx_);
    return basis_cache_.emplace(std::make_pair(i, k), std::move(form)).first->second;
}

const RatFunc& AnalyzedCurve::aux_differential(int i, int k) const {
    {
        std::shared_lock lk(mtx_);
        auto it = aux_cache_.find({i, k});
        if (it != aux_cache_.end()) return it->second;
    }
    RatFunc form;
    if (k == 0) {
        form = basis_form(i, 0);
    } else {
        form = -(aux_differential(i, k - 1) / curve_.x.derivative()).derivative();
    }
    std::unique_lock lk(mtx_);
    return aux_cache_.emplace(std::make_pair(i, k), std::move(form)).first->second;
}

const LaurentSeries& AnalyzedCurve::basis_expansion(int at_i, int j, int k) const {
    {
        std::shared_lock lk(mtx_);
        auto it = expansion_cache_.find({at_i, j, k});
        if (it != expansion_cache_.end()) return it->second;
    }
    LaurentSeries ser;
    if (at_i != j) {
        ser = compose_ratfunc(basis_form(j, k), frames_[at_i].z_of_s) * frames_[at_i].dz_ds;
        if (ser.valuation() < 0)
            throw std::logic_error("basis_expansion: cross-point expansion must be regular");
    } else {
        // sum_j c_j * delta^{-(j+1)} * z'(s), scaled by (2k+1)!!
        LaurentSeries acc;
        LaurentSeries inv_delta = delta_power(at_i, 1).inverse();
        LaurentSeries pw = inv_delta * inv_delta;
        bool first = true;
        for (int m = 1; m <= 2 * k + 1; ++m) {
            ExtScalar c = delta_power(at_i, m).coeff(2 * k + 1);
            if (!c.is_zero()) {
                if (first) { acc = pw * c; first = false; }
                else acc = acc + pw * c;
            }
            pw = pw * inv_delta;
        }
        ser = acc * frames_[at_i].dz_ds * ExtScalar(double_factorial_odd(k + 1));
        // Leading behaviour (2k+1)!! s^-(2k+2), no residue, even principal part.
        if (ser.valuation() != -2 * k - 2 ||
            ser.coeff(-2 * k - 2) != ExtScalar(double_factorial_odd(k + 1)))
            throw std::logic_error("basis_expansion: unexpected leading behaviour at own critical point");
        for (int m = -2 * k - 1; m <= -1; m += 2) {
            if (!ser.coeff(m).is_zero())
                throw std::logic_error("basis_expansion: odd principal part at own critical point");
        }
    }
    std::unique_lock lk(mtx_);
    return expansion_cache_.emplace(std::make_tuple(at_i, j, k), std::move(ser)).first->second;
}

RatFunc AnalyzedCurve::flat_differential(int alpha, int k) const {
    if (alpha != 1 && alpha != 2)
        throw std::invalid_argument("flat_differential: alpha must be 1 or 2");
    // xi^alpha_0 = dz/(1-z)^2 - (-1)^alpha dz/(1+z)^2, then iterated
    // (signed) x-derivatives as for the auxiliary family.
    Poly one_minus = poly_from({ExtScalar(1), ExtScalar(-1)});
    Poly one_plus = poly_from({ExtScalar(1), ExtScalar(1)});
    RatFunc first(Poly(ExtScalar(1)), one_minus * one_minus);
    RatFunc second(Poly(ExtScalar(1)), one_plus * one_plus);
    RatFunc form = (alpha == 1) ? first + second : first - second;
    for (int j = 0; j < k; ++j) form = -(form / curve_.x.derivative()).derivative();
    return form;
}

std::vector<std::vector<ExtScalar>> AnalyzedCurve::flat_to_basis_matrix() const {
    // Solve xi^alpha_0 = sum_i c_i basis_form(i,0) by matching the double-pole
    // coefficient at each critical point.
    int n = num_points();
    std::vector<std::vector<ExtScalar>> c(3, std::vector<ExtScalar>(n));
    for (int alpha = 1; alpha <= 2; ++alpha) {
        RatFunc flat = flat_differential(alpha, 0);
        RatFunc rem = flat;
        for (int i = 0; i < n; ++i) {
            // coefficient of (z - z_i)^-2 in flat / leading coefficient of basis_form
            const ExtScalar& z0 = points_[i].location;
            Poly lin = Poly::linear_root(z0);
            RatFunc scaled = flat * RatFunc(lin * lin, Poly(ExtScalar(1)));
            ExtScalar pp = scaled.eval(z0);
            ExtScalar lead = points_[i].branch_s1.inverse(); // basis_form ~ 1/(s1 (z-z_i)^2)
            c[alpha][i] = pp * lead.inverse();
            rem = rem - basis_form(i, 0) * c[alpha][i];
        }
        if (!rem.is_zero())
            throw std::logic_error("flat_to_basis_matrix: flat differential is not a combination of B(P_i, .)");
    }
    return {c[1], c[2]};
}

bool AnalyzedCurve::check_y_compatibility() const {
    RatFunc dydx = curve_.y.derivative() / curve_.x.derivative();
    RatFunc lhs = dydx.derivative();
    // RHS: -sum_i Res_{z'=z_i} dydx(z') / (z'-z)^2, a rational function of z.
    RatFunc rhs;
    for (const CriticalPoint& cp : points_) {
        // Laurent coefficients of dydx at z_i feed residues against the Cauchy kernel:
        // Res_{z'=z_i} g(z') (z'-z)^-2 = sum_{l>=0} g_{-1-l} (l+1) (z-z_i)^-(l+2)
        LaurentSeries g = expand_ratfunc(dydx, cp.location, 6);
        Poly lin = Poly::linear_root(cp.location); // (z - z_i)
        Poly pw = lin * lin;
        for (int l = 0; -1 - l >= g.lo(); ++l) {
            ExtScalar coeff = g.coeff(-1 - l);
            if (!coeff.is_zero())
                rhs = rhs - RatFunc(Poly(coeff * ExtScalar(Rational(l + 1))), pw);
            pw = pw * lin;
        }
    }
    return lhs == rhs;
}

} // namespace thetarec

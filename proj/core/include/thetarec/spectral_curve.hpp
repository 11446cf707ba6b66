#pragma once

#include "thetarec/laurent.hpp"

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <map>
#include <vector>

namespace thetarec {

/// Rational spectral curve data (CP^1, x, y, Cauchy kernel B).  The Bergman
/// kernel is fixed to B = dz1 dz2 / (z1-z2)^2.
struct SpectralCurve {
    RatFunc x;
    RatFunc y;
    /// Optional branch constants: pairs (critical point location, s1) with
    /// s1^2 = x''(location), overriding the deterministic sqrt_in_field choice.
    std::vector<std::pair<ExtScalar, ExtScalar>> branch_overrides;
    std::string name = "curve";

    static SpectralCurve airy();
    static SpectralCurve bessel();
    static SpectralCurve a2();
    static SpectralCurve bgw_a2();
    /// Built-in curve by name: airy | bessel | a2 | bgw-a2.
    static SpectralCurve builtin(const std::string& name);
};

struct CriticalPoint {
    int index = 0;
    ExtScalar location;  // z_i
    ExtScalar value;     // u_i = x(z_i)
    ExtScalar branch_s1; // chosen square root of x''(z_i)
    bool irregular = false;
};

/// A spectral curve with computed local frames.  Immutable after
/// construction apart from internal lazily filled caches, which are guarded
/// for concurrent use.
class AnalyzedCurve {
public:
    AnalyzedCurve(SpectralCurve curve, int frame_order);

    const SpectralCurve& curve() const { return curve_; }
    int frame_order() const { return order_; }
    int num_points() const { return (int)points_.size(); }
    const CriticalPoint& point(int i) const { return points_[i]; }
    bool any_irregular() const;

    /// z(s) with x(z(s)) = u_i + s^2/2; z(0) = z_i.
    const LaurentSeries& frame_z(int i) const { return frames_[i].z_of_s; }
    const LaurentSeries& frame_dz(int i) const { return frames_[i].dz_ds; }
    /// y(z(s)); a Laurent series with a simple pole at irregular points.
    const LaurentSeries& frame_y(int i) const { return frames_[i].y_of_s; }
    /// 1 / ((y(-s) - y(s)) * s), the reciprocal of the recursion kernel
    /// denominator in the frame at point i.
    const LaurentSeries& frame_inv_denom(int i) const { return frames_[i].inv_denom; }

    /// B(P_i, .) evaluated by residue: a rational differential (coefficient
    /// of dz) with a double pole at z_i.
    RatFunc bergman_at_critical(int i) const { return basis_form(i, 0); }

    /// Auxiliary differential family from iterated x-derivatives of B(P_i,.),
    /// normalized so the Airy curve gives (2k+1)!! z^-(2k+2) dz.
    const RatFunc& aux_differential(int i, int k) const;

    /// Basis differential xi^i_k used for correlator storage: the unique
    /// rational differential supported on principal parts at z_i with local
    /// behaviour (2k+1)!! (s^-(2k+2) + O(1)) ds and zero even-negative part.
    /// Equals aux_differential on curves with a single critical point.
    const RatFunc& basis_form(int i, int k) const;

    /// Local expansion of basis_form(j, k) in the frame at point i, as the
    /// coefficient series of ds.
    const LaurentSeries& basis_expansion(int at_i, int j, int k) const;

    /// Maximal auxiliary index storable for omega_{g,n} at point i, from the
    /// pole-order bound 6g-4+2n (regular) / 2g (irregular).
    int k_bound(int i, int g, int n) const;

    /// Flat differential family of the A2 curve (xi^alpha_0 per the fixed
    /// combination of double poles at z = -1,+1, then iterated derivatives).
    RatFunc flat_differential(int alpha, int k) const;
    /// Coefficients c with xi^alpha_0 = sum_i c[alpha][i] * basis_form(i, 0),
    /// solved from principal parts; 2x2 for the A2 curve.
    std::vector<std::vector<ExtScalar>> flat_to_basis_matrix() const;

    /// Check d(dy/dx) = -sum_i Res_{p'=P_i} (dy/dx)(p') B(p', p) as rational
    /// differentials.
    bool check_y_compatibility() const;

private:
    struct Frame {
        LaurentSeries z_of_s;
        LaurentSeries dz_ds;
        LaurentSeries y_of_s;
        LaurentSeries inv_denom;
        std::vector<LaurentSeries> delta_pow; // (z(s)-z_i)^m, filled as needed
    };

    RatFunc eta_form(int i, int k) const; // principal-part form, basis_form/(2k+1)!!
    const LaurentSeries& delta_power(int i, int m) const;

    SpectralCurve curve_;
    int order_;
    std::vector<CriticalPoint> points_;
    std::vector<Frame> frames_;

    mutable std::shared_mutex mtx_;
    mutable std::map<std::pair<int, int>, RatFunc> aux_cache_;
    mutable std::map<std::pair<int, int>, RatFunc> basis_cache_;
    mutable std::map<std::tuple<int, int, int>, LaurentSeries> expansion_cache_;
};

} // namespace thetarec

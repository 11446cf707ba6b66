#pragma once

#include "thetarec/spectral_curve.hpp"

#include <cstdint>
#include <map>
#include <memory>

namespace thetarec {

/// Basis label for one correlator slot: critical point index, auxiliary index
/// k, and a flag for the transient even principal-part forms that appear
/// while recursing (they must cancel in every finished correlator and are
/// asserted to do so).
struct SlotLabel {
    int point = 0;
    int k = 0;
    bool gamma = false;

    static constexpr uint32_t kGammaBit = 1u << 12;
    uint32_t encode() const {
        return (uint32_t(point) << 16) | (gamma ? kGammaBit : 0u) | uint32_t(k);
    }
    static SlotLabel decode(uint32_t v) {
        return {int(v >> 16), int(v & 0xfff), (v & kGammaBit) != 0};
    }
};

using LabelTuple = std::vector<uint32_t>;

/// Correlator omega_{g,n} stored as a symmetric tensor over the basis
/// differentials xi^i_k: keys are sorted label tuples, absent keys are zero.
struct Correlator {
    int g = 0;
    int n = 0;
    std::map<LabelTuple, ExtScalar> terms;

    ExtScalar coefficient(LabelTuple labels) const;
    bool is_zero() const { return terms.empty(); }
};

/// Chekhov-Eynard-Orantin recursion over an analyzed curve, with a
/// process-lifetime memo table (concurrent reads, exclusive inserts).
class CorrelatorEngine {
public:
    explicit CorrelatorEngine(std::shared_ptr<const AnalyzedCurve> curve);

    const AnalyzedCurve& curve() const { return *curve_; }

    /// omega_{g,n} for 2g-2+n > 0.
    std::shared_ptr<const Correlator> correlator(int g, int n);

    /// Rational form in one slot with the remaining slots fixed to basis
    /// labels (coefficient of dz).  For n = 1 pass an empty fixed list.
    RatFunc to_rational(const Correlator& w, const std::vector<SlotLabel>& fixed_others) const;

    /// Iterated residue at infinity of prod_j z_j^{m_j} * omega; one power per slot.
    ExtScalar residue_pairing(const Correlator& w, const std::vector<int>& powers) const;

    /// Orders of vanishing at z = infinity per slot (minimum over the other
    /// slots' label assignments) and their sum.
    std::pair<std::vector<int>, int> ord_infinity(const Correlator& w) const;

    /// F_g = sum_alpha Res_{p=alpha} Phi(p) omega_{g,1}(p) with dPhi = y dx.
    /// Throws if y dx has no rational antiderivative.
    ExtScalar symplectic_Fg(int g);

    /// sum_alpha Res Phi * omega_{g,n+1} == (2g-2+n) * omega_{g,n}, exactly.
    bool dilaton_check(int g, int n);

    /// Residue at infinity of z^m * basis_form(label), cached.
    ExtScalar residue_power_pairing(int m, SlotLabel label) const;

    /// Cache interface: seed a previously computed correlator / list the memo.
    void preload(std::shared_ptr<const Correlator> w);
    std::map<std::pair<int, int>, std::shared_ptr<const Correlator>> snapshot() const;

private:
    std::shared_ptr<const Correlator> compute(int g, int n);
    const LaurentSeries& ee_product(int i, uint32_t a, uint32_t b);
    LaurentSeries expansion_of(int at_i, uint32_t label, bool at_minus_s) const;
    RatFunc phi() ;

    std::shared_ptr<const AnalyzedCurve> curve_;

    mutable std::shared_mutex mtx_;
    std::map<std::pair<int, int>, std::shared_ptr<const Correlator>> memo_;
    std::map<std::tuple<int, uint32_t, uint32_t>, LaurentSeries> ee_cache_;
    mutable std::map<std::pair<int, uint32_t>, ExtScalar> resinf_cache_;
    std::optional<RatFunc> phi_;
    bool phi_done_ = false;
};

} // namespace thetarec

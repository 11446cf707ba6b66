#include "thetarec/recursion.hpp"

#include <algorithm>

namespace thetarec {

namespace {

bool stable(int g, int n) { return 2 * g - 2 + n > 0; }

std::vector<std::pair<uint32_t, int>> label_counts(const LabelTuple& t) {
    std::vector<std::pair<uint32_t, int>> out;
    for (uint32_t v : t) {
        if (!out.empty() && out.back().first == v) ++out.back().second;
        else out.emplace_back(v, 1);
    }
    return out;
}

LabelTuple remove_one(const LabelTuple& t, uint32_t v) {
    LabelTuple out;
    out.reserve(t.size() - 1);
    bool removed = false;
    for (uint32_t x : t) {
        if (!removed && x == v) { removed = true; continue; }
        out.push_back(x);
    }
    return out;
}

LabelTuple merge_sorted(const LabelTuple& a, const LabelTuple& b) {
    LabelTuple out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Rational binomial(int n, int k) {
    Rational r(1);
    for (int j = 0; j < k; ++j) r *= Rational(n - j, j + 1);
    return r;
}

/// Number of ways to pick an ordered-position subset of `rest` realizing the
/// sub-multiset `part`.
Rational split_multiplicity(const LabelTuple& rest, const LabelTuple& part) {
    Rational m(1);
    for (auto& [v, cnt] : label_counts(part)) {
        int total = (int)std::count(rest.begin(), rest.end(), v);
        m *= binomial(total, cnt);
    }
    return m;
}

} // namespace

ExtScalar Correlator::coefficient(LabelTuple labels) const {
    std::sort(labels.begin(), labels.end());
    auto it = terms.find(labels);
    return it == terms.end() ? ExtScalar() : it->second;
}

CorrelatorEngine::CorrelatorEngine(std::shared_ptr<const AnalyzedCurve> curve)
    : curve_(std::move(curve)) {}

std::shared_ptr<const Correlator> CorrelatorEngine::correlator(int g, int n) {
    if (!stable(g, n))
        throw std::invalid_argument("correlator: need 2g-2+n > 0 (omega_{0,1}, omega_{0,2} are base cases)");
    {
        std::shared_lock lk(mtx_);
        auto it = memo_.find({g, n});
        if (it != memo_.end()) return it->second;
    }
    auto value = compute(g, n);
    std::unique_lock lk(mtx_);
    return memo_.emplace(std::make_pair(g, n), std::move(value)).first->second;
}

LaurentSeries CorrelatorEngine::expansion_of(int at_i, uint32_t label, bool at_minus_s) const {
    SlotLabel l = SlotLabel::decode(label);
    if (l.gamma)
        throw std::logic_error("expansion_of: gamma labels never persist into stored correlators");
    LaurentSeries e = curve_->basis_expansion(at_i, l.point, l.k);
    return at_minus_s ? e.negate_variable() : e;
}

const LaurentSeries& CorrelatorEngine::ee_product(int i, uint32_t a, uint32_t b) {
    auto key = std::make_tuple(i, a, b);
    {
        std::shared_lock lk(mtx_);
        auto it = ee_cache_.find(key);
        if (it != ee_cache_.end()) return it->second;
    }
    LaurentSeries prod = expansion_of(i, a, false) * expansion_of(i, b, true);
    std::unique_lock lk(mtx_);
    return ee_cache_.emplace(key, std::move(prod)).first->second;
}

std::shared_ptr<const Correlator> CorrelatorEngine::compute(int g, int n) {
    const int N = curve_->num_points();

    std::map<std::pair<int, LabelTuple>, LaurentSeries> buckets;
    auto add_bucket = [&buckets](int i, LabelTuple rest, const LaurentSeries& ser) {
        std::sort(rest.begin(), rest.end());
        auto key = std::make_pair(i, std::move(rest));
        auto it = buckets.find(key);
        if (it == buckets.end()) buckets.emplace(std::move(key), ser);
        else it->second = it->second + ser;
    };

    // Coefficient series of the Cauchy-kernel factor B(z(+-s), .) on the
    // basis label l, as used when a genus-zero two-point piece covers a fixed
    // outer slot.
    auto cauchy_series = [](int, SlotLabel l, bool minus, int order) {
        if (!l.gamma)
            return LaurentSeries::monomial(ExtScalar(double_factorial_odd(l.k).inverse()), 2 * l.k, order);
        return LaurentSeries::monomial(ExtScalar(Rational(minus ? -l.k : l.k)), l.k - 1, order);
    };

    // Labels the Cauchy factor can feed into the remaining slots: the basis
    // family up to the pole bound plus the even principal-part (gamma) probes
    // asserted to cancel.
    auto cauchy_labels = [this, g, n](int i) {
        std::vector<SlotLabel> ls;
        int kb = curve_->k_bound(i, g, n);
        for (int k = 0; k <= kb; ++k) ls.push_back({i, k, false});
        for (int m = 2; m <= 2 * kb + 4; m += 2) ls.push_back({i, m, true});
        return ls;
    };

    const int base_order = curve_->frame_order();

    // Unstable (0,2) x (0,2) piece of omega_{0,3}, and B(p, p-hat) for omega_{1,1}.
    if (g == 1 && n == 1) {
        for (int i = 0; i < N; ++i) {
            const LaurentSeries& z = curve_->frame_z(i);
            const LaurentSeries& dz = curve_->frame_dz(i);
            LaurentSeries diff = z - z.negate_variable();
            LaurentSeries btilde = dz * dz.negate_variable() * (diff * diff).inverse();
            add_bucket(i, {}, btilde);
        }
    }

    // omega_{g-1, n+1}(p, p-hat, rest)
    if (g >= 1 && stable(g - 1, n + 1)) {
        auto child = correlator(g - 1, n + 1);
        for (const auto& [labels, v] : child->terms) {
            auto counts = label_counts(labels);
            for (const auto& [a, ca] : counts) {
                for (const auto& [b, cb] : counts) {
                    if (a == b && ca < 2) continue;
                    LabelTuple rest = remove_one(remove_one(labels, a), b);
                    for (int i = 0; i < N; ++i)
                        add_bucket(i, rest, ee_product(i, a, b) * v);
                }
            }
        }
    }

    // Splittings omega_{g1,|I|+1}(p, p_I) omega_{g2,|J|+1}(p-hat, p_J),
    // excluding omega_{0,1} factors.
    for (int g1 = 0; g1 <= g; ++g1) {
        int g2 = g - g1;
        for (int m1 = 1; m1 <= n; ++m1) {
            int m2 = n + 1 - m1;
            if (m2 < 1) continue;
            if (g1 == 0 && m1 == 1) continue;
            if (g2 == 0 && m2 == 1) continue;
            bool f1_cauchy = (g1 == 0 && m1 == 2);
            bool f2_cauchy = (g2 == 0 && m2 == 2);
            if (!f1_cauchy && !stable(g1, m1)) continue;
            if (!f2_cauchy && !stable(g2, m2)) continue;

            if (f1_cauchy && f2_cauchy) {
                if (n != 3) continue;
                for (int i = 0; i < N; ++i) {
                    for (SlotLabel la : cauchy_labels(i)) {
                        for (SlotLabel lb : cauchy_labels(i)) {
                            LabelTuple rest = {la.encode(), lb.encode()};
                            std::sort(rest.begin(), rest.end());
                            Rational mult = split_multiplicity(rest, {la.encode()});
                            LaurentSeries ser =
                                cauchy_series(i, la, false, base_order) *
                                cauchy_series(i, lb, true, base_order) * ExtScalar(mult);
                            add_bucket(i, rest, ser);
                        }
                    }
                }
            } else if (f1_cauchy || f2_cauchy) {
                int cg = f1_cauchy ? g2 : g1;
                int cm = f1_cauchy ? m2 : m1;
                auto child = correlator(cg, cm);
                for (const auto& [labels, v] : child->terms) {
                    for (const auto& [b, cb] : label_counts(labels)) {
                        LabelTuple r2 = remove_one(labels, b);
                        for (int i = 0; i < N; ++i) {
                            LaurentSeries eb = expansion_of(i, b, /*at -s for p-hat side*/ f1_cauchy);
                            for (SlotLabel la : cauchy_labels(i)) {
                                LabelTuple rest = r2;
                                rest.push_back(la.encode());
                                std::sort(rest.begin(), rest.end());
                                Rational mult = split_multiplicity(rest, {la.encode()});
                                LaurentSeries ser = cauchy_series(i, la, f2_cauchy, base_order) * eb *
                                                    (v * ExtScalar(mult));
                                add_bucket(i, rest, ser);
                            }
                        }
                    }
                }
            } else {
                auto c1 = correlator(g1, m1);
                auto c2 = correlator(g2, m2);
                for (const auto& [mu1, v1] : c1->terms) {
                    for (const auto& [mu2, v2] : c2->terms) {
                        for (const auto& [a, ca] : label_counts(mu1)) {
                            LabelTuple r1 = remove_one(mu1, a);
                            for (const auto& [b, cb] : label_counts(mu2)) {
                                LabelTuple r2 = remove_one(mu2, b);
                                LabelTuple rest = merge_sorted(r1, r2);
                                Rational mult = split_multiplicity(rest, r1);
                                ExtScalar w = v1 * v2 * ExtScalar(mult);
                                for (int i = 0; i < N; ++i)
                                    add_bucket(i, rest, ee_product(i, a, b) * w);
                            }
                        }
                    }
                }
            }
        }
    }

    // Extract basis coefficients: U = -W / ((y(-s)-y(s)) s), coefficient of
    // xi^i_k is [s^(-2k-2)] U / (2k+1)!!.
    auto out = std::make_shared<Correlator>();
    out->g = g;
    out->n = n;
    for (const auto& [key, w] : buckets) {
        int i = key.first;
        const LabelTuple& rest = key.second;
        LaurentSeries u = -(w * curve_->frame_inv_denom(i));
        int kb = curve_->k_bound(i, g, n);
        int val = u.valuation();
        if (val < -(2 * kb + 2)) {
            throw std::logic_error("correlator: pole-order bound violated at point " + std::to_string(i) +
                                   " for (g,n)=(" + std::to_string(g) + "," + std::to_string(n) + ")");
        }
        bool rest_has_gamma = false;
        for (uint32_t x : rest)
            if (SlotLabel::decode(x).gamma) rest_has_gamma = true;
        for (int k1 = 0; k1 <= kb; ++k1) {
            ExtScalar c = u.coeff(-2 * k1 - 2) * ExtScalar(double_factorial_odd(k1 + 1).inverse());
            if (rest_has_gamma) {
                if (!c.is_zero())
                    throw std::logic_error("correlator: even principal-part component failed to cancel "
                                           "for (g,n)=(" + std::to_string(g) + "," + std::to_string(n) + ")");
                continue;
            }
            if (c.is_zero()) continue;
            LabelTuple tuple = rest;
            tuple.push_back(SlotLabel{i, k1, false}.encode());
            std::sort(tuple.begin(), tuple.end());
            auto it = out->terms.find(tuple);
            if (it == out->terms.end()) {
                out->terms.emplace(std::move(tuple), c);
            } else if (it->second != c) {
                throw std::logic_error("correlator: slot-symmetry violation for (g,n)=(" +
                                       std::to_string(g) + "," + std::to_string(n) + ")");
            }
        }
    }
    return out;
}

RatFunc CorrelatorEngine::to_rational(const Correlator& w,
                                      const std::vector<SlotLabel>& fixed_others) const {
    if ((int)fixed_others.size() != w.n - 1)
        throw std::invalid_argument("to_rational: need one fixed label per remaining slot");
    LabelTuple fixed;
    for (const SlotLabel& l : fixed_others) fixed.push_back(l.encode());
    std::sort(fixed.begin(), fixed.end());

    RatFunc sum;
    for (const auto& [labels, v] : w.terms) {
        LabelTuple remaining = labels;
        bool ok = true;
        for (uint32_t f : fixed) {
            auto it = std::find(remaining.begin(), remaining.end(), f);
            if (it == remaining.end()) { ok = false; break; }
            remaining.erase(it);
        }
        if (!ok || remaining.size() != 1) continue;
        SlotLabel l = SlotLabel::decode(remaining[0]);
        sum = sum + curve_->basis_form(l.point, l.k) * v;
    }
    return sum;
}

ExtScalar CorrelatorEngine::residue_power_pairing(int m, SlotLabel label) const {
    auto key = std::make_pair(m, label.encode());
    {
        std::shared_lock lk(mtx_);
        auto it = resinf_cache_.find(key);
        if (it != resinf_cache_.end()) return it->second;
    }
    RatFunc f = curve_->basis_form(label.point, label.k) * RatFunc(Poly::monomial(m), Poly(ExtScalar(1)));
    ExtScalar r = f.residue_at_infinity();
    std::unique_lock lk(mtx_);
    resinf_cache_.emplace(key, r);
    return r;
}

ExtScalar CorrelatorEngine::residue_pairing(const Correlator& w, const std::vector<int>& powers) const {
    if ((int)powers.size() != w.n)
        throw std::invalid_argument("residue_pairing: need one power per slot");
    ExtScalar total;
    for (const auto& [labels, v] : w.terms) {
        LabelTuple perm = labels;
        ExtScalar orderings;
        do {
            ExtScalar prod(1);
            for (size_t j = 0; j < perm.size(); ++j) {
                prod *= residue_power_pairing(powers[j], SlotLabel::decode(perm[j]));
                if (prod.is_zero()) break;
            }
            orderings += prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
        total += v * orderings;
    }
    return total;
}

std::pair<std::vector<int>, int> CorrelatorEngine::ord_infinity(const Correlator& w) const {
    std::vector<int> orders(w.n, 1 << 20);
    // Per-slot order for generic values of the other variables.
    std::map<LabelTuple, RatFunc> combos;
    for (const auto& [labels, v] : w.terms) {
        auto counts = label_counts(labels);
        for (const auto& [a, ca] : counts) {
            LabelTuple rest = remove_one(labels, a);
            SlotLabel l = SlotLabel::decode(a);
            auto [it, fresh] = combos.try_emplace(rest, RatFunc());
            it->second = it->second + curve_->basis_form(l.point, l.k) * v;
        }
    }
    int slotmin = 1 << 20;
    for (const auto& [rest, f] : combos) {
        if (f.is_zero()) continue;
        slotmin = std::min(slotmin, f.order_at_infinity_as_differential());
    }
    for (int slot = 0; slot < w.n; ++slot) orders[slot] = slotmin;
    if (w.terms.empty()) return {orders, w.n * slotmin};

    // Total order along a diagonal scaling z_j = c_j t (the total-degree count
    // behind the vanishing lemma); min over sample directions guards against
    // special cancellations.
    auto poly_subst = [](const Poly& p, const ExtScalar& c) {
        std::vector<ExtScalar> out(p.degree() + 1);
        ExtScalar pw(1);
        for (int k = 0; k <= p.degree(); ++k) {
            out[k] = p.coeff(k) * pw;
            pw *= c;
        }
        return Poly(std::move(out));
    };
    int total = 1 << 20;
    for (int sample = 0; sample < 2; ++sample) {
        std::vector<ExtScalar> cs;
        for (int j = 0; j < w.n; ++j) cs.push_back(ExtScalar(Rational(2 + 2 * j + sample)));
        RatFunc f;
        for (const auto& [labels, v] : w.terms) {
            LabelTuple perm = labels;
            do {
                RatFunc prod(v);
                for (size_t j = 0; j < perm.size(); ++j) {
                    SlotLabel l = SlotLabel::decode(perm[j]);
                    const RatFunc& b = curve_->basis_form(l.point, l.k);
                    prod = prod * RatFunc(poly_subst(b.num(), cs[j]), poly_subst(b.den(), cs[j])) * cs[j];
                }
                f = f + prod;
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        if (f.is_zero()) continue;
        int ord = f.den().degree() - f.num().degree() - 2 * w.n;
        total = std::min(total, ord);
    }
    return {orders, total};
}

void CorrelatorEngine::preload(std::shared_ptr<const Correlator> w) {
    std::unique_lock lk(mtx_);
    memo_.emplace(std::make_pair(w->g, w->n), std::move(w));
}

std::map<std::pair<int, int>, std::shared_ptr<const Correlator>> CorrelatorEngine::snapshot() const {
    std::shared_lock lk(mtx_);
    return memo_;
}

RatFunc CorrelatorEngine::phi() {
    {
        std::shared_lock lk(mtx_);
        if (phi_done_) {
            if (!phi_) throw std::domain_error("symplectic_Fg: y dx has no rational antiderivative (log case)");
            return *phi_;
        }
    }
    RatFunc ydx = curve_->curve().y * curve_->curve().x.derivative();
    auto anti = ydx.antiderivative();
    std::unique_lock lk(mtx_);
    phi_ = anti;
    phi_done_ = true;
    if (!phi_) throw std::domain_error("symplectic_Fg: y dx has no rational antiderivative (log case)");
    return *phi_;
}

ExtScalar CorrelatorEngine::symplectic_Fg(int g) {
    RatFunc p = phi();
    auto w = correlator(g, 1);
    RatFunc form = to_rational(*w, {}) * p;
    ExtScalar sum;
    for (int i = 0; i < curve_->num_points(); ++i)
        sum += form.residue_at(curve_->point(i).location);
    return sum;
}

bool CorrelatorEngine::dilaton_check(int g, int n) {
    RatFunc p = phi();
    auto big = correlator(g, n + 1);
    auto small = correlator(g, n);

    // Contract the last slot: r_b = sum_i Res_{z_i} Phi * xi^b.
    std::map<uint32_t, ExtScalar> rb;
    auto contract = [&](uint32_t b) {
        auto it = rb.find(b);
        if (it != rb.end()) return it->second;
        SlotLabel l = SlotLabel::decode(b);
        RatFunc f = curve_->basis_form(l.point, l.k) * p;
        ExtScalar sum;
        for (int i = 0; i < curve_->num_points(); ++i)
            sum += f.residue_at(curve_->point(i).location);
        rb.emplace(b, sum);
        return sum;
    };

    std::map<LabelTuple, ExtScalar> contracted;
    for (const auto& [labels, v] : big->terms) {
        for (const auto& [b, cb] : label_counts(labels)) {
            ExtScalar r = contract(b);
            if (r.is_zero()) continue;
            LabelTuple rest = remove_one(labels, b);
            contracted[rest] += v * r;
        }
    }
    for (auto it = contracted.begin(); it != contracted.end();) {
        if (it->second.is_zero()) it = contracted.erase(it);
        else ++it;
    }

    ExtScalar factor(Rational(2 * g - 2 + n));
    std::map<LabelTuple, ExtScalar> expected;
    for (const auto& [labels, v] : small->terms) expected[labels] = v * factor;
    return contracted == expected;
}

} // namespace thetarec

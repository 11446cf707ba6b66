#include "thetarec/tau.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace thetarec {

void MultiSeries::add_term(const std::vector<int>& exponents, const Rational& c) {
    if ((int)exponents.size() != nvars_)
        throw std::invalid_argument("MultiSeries: exponent vector length mismatch");
    if (c.is_zero()) return;
    int deg = std::accumulate(exponents.begin(), exponents.end(), 0);
    if (deg > cap_) return;
    auto it = terms_.find(exponents);
    if (it == terms_.end()) {
        terms_.emplace(exponents, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Rational MultiSeries::coefficient(const std::vector<int>& exponents) const {
    auto it = terms_.find(exponents);
    return it == terms_.end() ? Rational(0) : it->second;
}

MultiSeries MultiSeries::operator+(const MultiSeries& o) const {
    MultiSeries r = *this;
    r.cap_ = std::min(cap_, o.cap_);
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

MultiSeries MultiSeries::operator-(const MultiSeries& o) const {
    MultiSeries r = *this;
    r.cap_ = std::min(cap_, o.cap_);
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

MultiSeries MultiSeries::operator*(const MultiSeries& o) const {
    MultiSeries r(nvars_, std::min(cap_, o.cap_));
    std::vector<int> e(nvars_);
    for (const auto& [e1, c1] : terms_) {
        for (const auto& [e2, c2] : o.terms_) {
            for (int j = 0; j < nvars_; ++j) e[j] = e1[j] + e2[j];
            r.add_term(e, c1 * c2);
        }
    }
    return r;
}

MultiSeries MultiSeries::scaled(const Rational& c) const {
    MultiSeries r(nvars_, cap_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

MultiSeries MultiSeries::derivative(int var) const {
    MultiSeries r(nvars_, cap_);
    for (const auto& [e, v] : terms_) {
        if (e[var] == 0) continue;
        std::vector<int> d = e;
        d[var] -= 1;
        r.add_term(d, v * Rational(e[var]));
    }
    return r;
}

bool TauTable::satisfies_rule(int g, const std::vector<int>& ks) const {
    int sum = std::accumulate(ks.begin(), ks.end(), 0);
    int n = (int)ks.size();
    return rule_ == SelectionRule::kw ? sum == 3 * g - 3 + n : sum == g - 1;
}

void TauTable::insert(int g, std::vector<int> ks, const Rational& value) {
    std::sort(ks.begin(), ks.end());
    if (!value.is_zero() && !satisfies_rule(g, ks)) {
        std::ostringstream os;
        os << "TauTable(" << provenance_ << "): selection rule violated at g=" << g << ", k=[";
        for (int k : ks) os << k << " ";
        os << "], value " << value.to_string();
        throw std::logic_error(os.str());
    }
    if (value.is_zero()) return;
    entries_[{g, std::move(ks)}] = value;
}

std::optional<Rational> TauTable::entry(int g, std::vector<int> ks) const {
    std::sort(ks.begin(), ks.end());
    if (!satisfies_rule(g, ks)) return Rational(0);
    auto it = entries_.find({g, ks});
    if (it != entries_.end()) return it->second;
    if (g <= g_max_ && (int)ks.size() <= n_max_) return Rational(0);
    return std::nullopt;
}

void FlatTauTable::insert(int g, std::vector<std::pair<int, int>> slots, const ExtScalar& v) {
    if (v.is_zero()) return;
    std::sort(slots.begin(), slots.end());
    entries_[{g, std::move(slots)}] = v;
}

ExtScalar FlatTauTable::entry(int g, std::vector<std::pair<int, int>> slots) const {
    std::sort(slots.begin(), slots.end());
    auto it = entries_.find({g, slots});
    return it == entries_.end() ? ExtScalar() : it->second;
}

TauTable assemble_tau_table(CorrelatorEngine& engine, SelectionRule rule, int g_max, int n_max) {
    if (engine.curve().num_points() != 1)
        throw std::invalid_argument("assemble_tau_table: single-variable tables need a one-critical-point curve");
    TauTable table(rule, engine.curve().curve().name);
    for (int g = 0; g <= g_max; ++g) {
        for (int n = 1; n <= n_max; ++n) {
            if (2 * g - 2 + n <= 0) continue;
            auto w = engine.correlator(g, n);
            for (const auto& [labels, v] : w->terms) {
                std::vector<int> ks;
                for (uint32_t l : labels) ks.push_back(SlotLabel::decode(l).k);
                table.insert(g, std::move(ks), v.as_rational());
            }
        }
    }
    table.set_range(g_max, n_max);
    return table;
}

FlatTauTable assemble_flat_table(CorrelatorEngine& engine, int g_max, int n_max) {
    auto cmat = engine.curve().flat_to_basis_matrix();
    int npts = engine.curve().num_points();
    int nflat = (int)cmat.size();
    // Invert the flat -> basis matrix (square, desk-scale dimensions).
    if (nflat != npts)
        throw std::invalid_argument("assemble_flat_table: flat family size must match critical point count");
    // Gaussian elimination over K.
    std::vector<std::vector<ExtScalar>> a(cmat);
    std::vector<std::vector<ExtScalar>> inv(npts, std::vector<ExtScalar>(npts));
    for (int i = 0; i < npts; ++i) inv[i][i] = ExtScalar(1);
    for (int col = 0; col < npts; ++col) {
        int pivot = -1;
        for (int r = col; r < npts; ++r)
            if (!a[r][col].is_zero()) { pivot = r; break; }
        if (pivot < 0) throw std::logic_error("assemble_flat_table: singular flat-to-basis transform");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        ExtScalar d = a[col][col].inverse();
        for (int c = 0; c < npts; ++c) { a[col][c] *= d; inv[col][c] *= d; }
        for (int r = 0; r < npts; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            ExtScalar f = a[r][col];
            for (int c = 0; c < npts; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    // cmat[alpha][i]: xi^alpha = sum_i cmat[alpha][i] xihat^i, so
    // xihat^i = sum_alpha inv[i][alpha] xi^alpha  (inv of cmat as alpha x i).
    // Note cmat rows are alpha-indexed: invert that matrix.
    FlatTauTable table;
    for (int g = 0; g <= g_max; ++g) {
        for (int n = 1; n <= n_max; ++n) {
            if (2 * g - 2 + n <= 0) continue;
            auto w = engine.correlator(g, n);
            std::map<std::vector<std::pair<int, int>>, ExtScalar> acc;
            for (const auto& [labels, v] : w->terms) {
                // Expand each distinct permutation of the entry over flat indices.
                LabelTuple perm = labels;
                std::map<std::vector<std::pair<int, int>>, ExtScalar> local;
                do {
                    std::vector<int> pts(perm.size()), ks(perm.size());
                    for (size_t j = 0; j < perm.size(); ++j) {
                        SlotLabel l = SlotLabel::decode(perm[j]);
                        pts[j] = l.point;
                        ks[j] = l.k;
                    }
                    // Iterate flat assignments, keeping only the sorted
                    // representative of each (alpha, k) slot tuple: the flat
                    // tensor is symmetric and stored once per orbit.
                    std::vector<int> alpha(perm.size(), 0);
                    while (true) {
                        std::vector<std::pair<int, int>> key(perm.size());
                        for (size_t j = 0; j < perm.size(); ++j) key[j] = {alpha[j] + 1, ks[j]};
                        if (std::is_sorted(key.begin(), key.end())) {
                            ExtScalar coeff(1);
                            for (size_t j = 0; j < perm.size(); ++j) coeff *= inv[pts[j]][alpha[j]];
                            if (!coeff.is_zero()) local[key] += coeff;
                        }
                        int j = 0;
                        while (j < (int)perm.size() && ++alpha[j] == nflat) alpha[j++] = 0;
                        if (j == (int)perm.size()) break;
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
                for (auto& [key, c] : local) acc[key] += c * v;
            }
            for (auto& [key, c] : acc)
                if (!c.is_zero()) table.insert(g, key, c);
        }
    }
    return table;
}

namespace {

/// F_g as a polynomial in t_0..t_m truncated to total degree <= cap.
/// Requires every selection-rule-passing entry with n <= cap slots and
/// indices <= m; the missing list is reported.
std::optional<MultiSeries> build_fg(const TauTable& table, int g, int nvars, int cap,
                                    std::string* missing) {
    MultiSeries f(nvars, cap);
    // Enumerate sorted index multisets with size <= cap and entries <= nvars-1.
    std::vector<int> ks;
    auto recurse = [&](auto&& self, int max_next, int remaining) -> void {
        if (!ks.empty() && table.satisfies_rule(g, ks)) {
            auto e = table.entry(g, ks);
            if (!e) {
                *missing += " (g=" + std::to_string(g) + ", n=" + std::to_string(ks.size()) + ")";
            } else if (!e->is_zero()) {
                std::vector<int> expo(nvars, 0);
                for (int k : ks) expo[k] += 1;
                Rational denom(1);
                for (int j = 0; j < nvars; ++j)
                    for (int a = 2; a <= expo[j]; ++a) denom *= Rational(a);
                f.add_term(expo, *e / denom);
            }
        }
        if (remaining == 0) return;
        for (int k = max_next; k >= 0; --k) {
            ks.push_back(k);
            self(self, k, remaining - 1);
            ks.pop_back();
        }
    };
    recurse(recurse, nvars - 1, cap);
    if (!missing->empty()) return std::nullopt;
    return f;
}

} // namespace

KdvReport kdv_check(const TauTable& table, int degree_bound, int index_bound) {
    KdvReport report;
    int nvars = index_bound + 1;
    int gmax = table.g_max();
    int slot_cap = degree_bound + 5; // enough slots for the third t0-derivative
    int cap = slot_cap;

    std::vector<MultiSeries> u;
    for (int g = 0; g <= gmax; ++g) {
        std::string missing;
        auto f = build_fg(table, g, nvars, cap, &missing);
        if (!f) {
            report.detail = "incomplete table, missing entries:" + missing;
            return report;
        }
        u.push_back(f->derivative(0).derivative(0));
    }

    for (int g = 0; g <= gmax; ++g) {
        MultiSeries lhs = u[g].derivative(1);
        MultiSeries rhs(nvars, cap);
        for (int g1 = 0; g1 <= g; ++g1) rhs = rhs + u[g1] * u[g - g1].derivative(0);
        if (g >= 1)
            rhs = rhs + u[g - 1].derivative(0).derivative(0).derivative(0).scaled(Rational(1, 12));
        MultiSeries diff = lhs - rhs;
        for (const auto& [e, c] : diff.terms()) {
            int deg = std::accumulate(e.begin(), e.end(), 0);
            if (deg <= degree_bound) {
                std::ostringstream os;
                os << "KdV fails at hbar^" << g << ", monomial";
                for (int j = 0; j < nvars; ++j)
                    if (e[j]) os << " t" << j << "^" << e[j];
                os << ": residual " << c.to_string();
                report.detail = os.str();
                return report;
            }
        }
    }
    report.passed = true;
    report.detail = "KdV equation verified to degree " + std::to_string(degree_bound) +
                    " with indices <= " + std::to_string(index_bound);
    return report;
}

bool bgw_initial_condition_check(const TauTable& table) {
    // (1, [0^n]) = (n-1)!/8 for all n in range; all-zero entries vanish for g >= 2.
    for (int n = 1; n <= table.n_max(); ++n) {
        Rational expect(1, 8);
        for (int a = 1; a < n; ++a) expect *= Rational(a);
        auto e = table.entry(1, std::vector<int>(n, 0));
        if (!e || *e != expect) return false;
    }
    for (int g = 2; g <= table.g_max(); ++g) {
        for (int n = 1; n <= table.n_max(); ++n) {
            auto e = table.entry(g, std::vector<int>(n, 0));
            if (!e || !e->is_zero()) return false;
        }
    }
    return true;
}

bool dilaton_homogeneity_check(const TauTable& table, int g_max) {
    for (const auto& [key, value] : table.entries()) {
        auto [g, ks] = key;
        if (g > g_max) continue;
        int n = (int)ks.size();
        if (n + 1 <= table.n_max()) {
            std::vector<int> grown = ks;
            grown.push_back(0);
            auto child = table.entry(g, grown);
            if (!child || *child != value * Rational(2 * g - 2 + n)) return false;
        }
        // Entries containing a zero must match their parent.
        if (!ks.empty() && ks.front() == 0) {
            std::vector<int> parent(ks.begin() + 1, ks.end());
            if (parent.empty()) continue;
            auto p = table.entry(g, parent);
            if (!p || value != *p * Rational(2 * g - 2 + n - 1)) return false;
        }
    }
    return true;
}

} // namespace thetarec

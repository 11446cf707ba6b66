#pragma once

#include "thetarec/recursion.hpp"

#include <optional>

namespace thetarec {

/// Sparse exact polynomial in t_0..t_m, used to verify differential
/// identities on truncations of log Z.
class MultiSeries {
public:
    MultiSeries(int num_vars, int degree_cap) : nvars_(num_vars), cap_(degree_cap) {}

    int num_vars() const { return nvars_; }
    int degree_cap() const { return cap_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const std::vector<int>& exponents, const Rational& c);
    Rational coefficient(const std::vector<int>& exponents) const;

    MultiSeries operator+(const MultiSeries& o) const;
    MultiSeries operator-(const MultiSeries& o) const;
    MultiSeries operator*(const MultiSeries& o) const;
    MultiSeries scaled(const Rational& c) const;
    MultiSeries derivative(int var) const;

    bool operator==(const MultiSeries& o) const { return terms_ == o.terms_; }
    const std::map<std::vector<int>, Rational>& terms() const { return terms_; }

private:
    int nvars_;
    int cap_;
    std::map<std::vector<int>, Rational> terms_;
};

enum class SelectionRule {
    kw,  // sum k_i = 3g - 3 + n
    bgw, // sum k_i = g - 1
};

/// Coefficient table of log Z: (g, sorted psi-index multiset) -> rational.
/// The stored value is the intersection-number normalization: the coefficient
/// of prod t_k^{a_k} in F_g equals entry / prod a_k!.
class TauTable {
public:
    TauTable(SelectionRule rule, std::string provenance)
        : rule_(rule), provenance_(std::move(provenance)) {}

    SelectionRule rule() const { return rule_; }
    const std::string& provenance() const { return provenance_; }
    int g_max() const { return g_max_; }
    int n_max() const { return n_max_; }

    /// Insert, asserting the selection rule.
    void insert(int g, std::vector<int> ks, const Rational& value);
    void set_range(int g_max, int n_max) { g_max_ = g_max; n_max_ = n_max; }

    /// Entry lookup; zero for rule-violating or absent-in-range keys, nullopt
    /// beyond the assembled range.
    std::optional<Rational> entry(int g, std::vector<int> ks) const;
    bool satisfies_rule(int g, const std::vector<int>& ks) const;

    const std::map<std::pair<int, std::vector<int>>, Rational>& entries() const { return entries_; }

private:
    SelectionRule rule_;
    std::string provenance_;
    int g_max_ = -1;
    int n_max_ = -1;
    std::map<std::pair<int, std::vector<int>>, Rational> entries_;
};

/// Two-index table for the flat-basis A2 coefficients:
/// (g, sorted list of (alpha, k)) -> scalar in K.
class FlatTauTable {
public:
    using Key = std::pair<int, std::vector<std::pair<int, int>>>;
    void insert(int g, std::vector<std::pair<int, int>> slots, const ExtScalar& v);
    ExtScalar entry(int g, std::vector<std::pair<int, int>> slots) const;
    const std::map<Key, ExtScalar>& entries() const { return entries_; }

private:
    std::map<Key, ExtScalar> entries_;
};

/// Read correlator coefficients off a one-critical-point curve into a table.
TauTable assemble_tau_table(CorrelatorEngine& engine, SelectionRule rule, int g_max, int n_max);

/// Read A2 correlators in the flat basis: the slot-wise linear transform from
/// flat_to_basis_matrix is applied at every auxiliary level k.
FlatTauTable assemble_flat_table(CorrelatorEngine& engine, int g_max, int n_max);

struct KdvReport {
    bool passed = false;
    std::string detail;
};

/// Verify the KdV equation U_{t1} = U U_{t0} + (hbar/12) U_{t0 t0 t0} for
/// U = hbar d^2/dt0^2 log Z on all monomials of total degree <= degree_bound
/// in t_0..t_{index_bound}; genus components up to the table's g_max.
/// Errors (in the report) if required entries are missing.
KdvReport kdv_check(const TauTable& table, int degree_bound, int index_bound);

/// U(t0, 0, 0, ...) = hbar/8 * sum (n+1) t0^n, i.e. entries
/// (g=1, [0^n]) = (n-1)!/8 and no all-zero entries in higher genus.
bool bgw_initial_condition_check(const TauTable& table);

/// entry(g, K + [0]) = (2g-2+n) entry(g, K) for every stored K in range.
bool dilaton_homogeneity_check(const TauTable& table, int g_max);

} // namespace thetarec

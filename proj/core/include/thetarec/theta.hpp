#pragma once

#include "thetarec/stable_graph.hpp"

namespace thetarec {

struct ThetaQuery {
    int g = 0;
    int n = 0;
    std::vector<int> psi;   // one exponent per marked point
    std::vector<int> kappa; // kappa class indices
};

struct ThetaAnswer {
    Rational value;
    std::string pipeline;
    bool dimension_ok = true;
    std::string note;
};

/// Table of Theta intersection numbers built by solving shipped tautological
/// relations with generic initial value Theta_{1,1} = lambda psi_1, extended
/// across n by the dilaton equation.
class RelationsTable {
public:
    RelationsTable();

    /// Solve a relation for its single unknown entry and store it; the genus
    /// row is then dilaton-extended to n_max.
    void solve_and_insert(const TautRelation& rel, int unknown_g, std::vector<int> unknown_psi,
                          int n_max);
    void extend_by_dilaton(int g, int n_max);
    void insert(int g, std::vector<int> psi, LambdaPoly value);

    std::optional<LambdaPoly> entry(int g, std::vector<int> psi) const;
    ThetaValueOracle oracle() const;
    int g_max() const { return g_max_; }

    const std::map<std::pair<int, std::vector<int>>, LambdaPoly>& entries() const { return entries_; }

private:
    std::map<std::pair<int, std::vector<int>>, LambdaPoly> entries_;
    int g_max_ = 1;
};

/// The user-facing Theta intersection number service, cross-validating the
/// Bessel-curve pipeline against the tautological-relations pipeline.
class ThetaService {
public:
    /// Builds the Bessel table up to (g_max, n_max) by topological recursion.
    ThetaService(int g_max, int n_max, bool auto_extend = true);

    /// Attach a relations table (lambda-generic).
    void set_relations_table(RelationsTable table) { relations_ = std::move(table); }
    const RelationsTable* relations_table() const { return relations_ ? &*relations_ : nullptr; }

    /// pipeline: "bessel" (default) or "relations" (lambda = 3).
    ThetaAnswer theta(const ThetaQuery& query, const std::string& pipeline = "bessel");

    /// Lambda-generic value through the relations pipeline.
    LambdaPoly theta_lambda_generic(const ThetaQuery& query);

    /// Integrals of Theta_{1,n}: (n-1)!/8.
    std::vector<Rational> theta_one_table(int n_max);

    /// Rational part of the Theta Weil-Petersson volume: the integral of
    /// Theta_{g,n} kappa_1^{g-1}.
    Rational wp_volume_coefficient(int g, int n);

    const TauTable& bessel_table() const { return bessel_table_; }
    CorrelatorEngine& engine() { return *engine_; }

    /// Bessel-backed oracle over sorted psi keys.
    ThetaValueOracle bessel_oracle();

private:
    void ensure_bessel(int g, int n);

    std::shared_ptr<const AnalyzedCurve> curve_;
    std::unique_ptr<CorrelatorEngine> engine_;
    TauTable bessel_table_;
    bool auto_extend_;
    std::optional<RelationsTable> relations_;
};

} // namespace thetarec

#pragma once

#include "thetarec/givental.hpp"
#include "thetarec/tau.hpp"

#include <functional>
#include <optional>
#include <string>

namespace thetarec {

/// Polynomial in the initial-value parameter lambda over Q.  The relations
/// pipeline computes with generic lambda; lambda = 3 reproduces the Theta
/// numbers.
class LambdaPoly {
public:
    LambdaPoly() = default;
    LambdaPoly(Rational c) { if (!c.is_zero()) c_.push_back(std::move(c)); }
    static LambdaPoly lambda() { return LambdaPoly(std::vector<Rational>{Rational(0), Rational(1)}); }
    explicit LambdaPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { strip(); }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    int degree() const { return (int)c_.size() - 1; }
    Rational coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : Rational(0); }
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational at(const Rational& lambda_value) const;
    Rational constant() const;

    LambdaPoly operator-() const;
    friend LambdaPoly operator+(const LambdaPoly& a, const LambdaPoly& b);
    friend LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b);
    friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
    LambdaPoly scaled(const Rational& r) const;
    friend bool operator==(const LambdaPoly& a, const LambdaPoly& b) { return a.c_ == b.c_; }

    std::string to_string() const;

private:
    void strip() { while (!c_.empty() && c_.back().is_zero()) c_.pop_back(); }
    std::vector<Rational> c_;
};

/// Stable graph: genus-labeled vertices, edge multiset (loops allowed),
/// labeled legs assigned to vertices.
struct StableGraph {
    std::vector<int> genus;
    std::vector<std::pair<int, int>> edges; // normalized u <= v
    std::vector<int> legs;                  // legs[j] = vertex of leg j+1

    int num_vertices() const { return (int)genus.size(); }
    int first_betti() const { return (int)edges.size() - num_vertices() + 1; }
    int total_genus() const;
    /// Edge-ends plus legs per vertex.
    std::vector<int> valences() const;
    bool is_connected() const;
    bool is_stable() const;

    /// Attachment count at a vertex (n_v).
    int valence(int v) const { return valences()[v]; }
};

/// |Aut|: vertex permutations preserving genus, the edge multiset and every
/// leg pointwise, times the half-edge symmetries of multi-edges and loops.
long aut_order(const StableGraph& g);

/// Brute-force |Aut| over half-edge bijections; for cross-checking.
long aut_order_brute_force(const StableGraph& g);

/// All isomorphism classes of stable graphs of type (g,n) with |Aut|.
std::vector<std::pair<StableGraph, long>> enumerate_stable_graphs(int g, int n);

/// Vertex integral oracle: (genus, sorted psi exponents) -> value, nullopt
/// when the entry is not yet known.
using ThetaValueOracle = std::function<std::optional<LambdaPoly>(int, const std::vector<int>&)>;

/// One decorated-graph summand of a tautological relation.
struct GraphTerm {
    StableGraph graph;
    std::vector<std::vector<int>> psi;   // per vertex, aligned with the attachment order
    std::vector<std::vector<int>> kappa; // kappa indices per vertex
    Rational coeff;
};

/// Summand already reduced to a product of Theta integrals with an explicit
/// automorphism divisor (the appendix genus-3 fixtures ship in this shape).
struct ReducedTerm {
    struct Factor {
        int g = 0;
        std::vector<int> psi;
    };
    std::vector<Factor> factors;
    long aut = 1;
    Rational coeff;
};

struct TautRelation {
    std::string name;
    int g = 0;
    int n = 0;
    std::vector<GraphTerm> graph_terms;
    std::vector<ReducedTerm> reduced_terms;
    /// Optional hint naming the entry this relation is solved for.
    int solve_g = -1;
    std::vector<int> solve_psi;
};

/// Expand a kappa monomial into psi integrals over set partitions
/// (kappa_m = R_(m) with R_bold-m the forgetful push-forwards) and evaluate.
std::optional<LambdaPoly> kappa_to_psi(int g, const std::vector<int>& psi,
                                       const std::vector<int>& kappa,
                                       const ThetaValueOracle& oracle);

/// Sum of coeff/|Aut| * product of Theta vertex integrals over all terms;
/// genus-0 vertices kill their term.  Throws naming any missing oracle entry.
LambdaPoly evaluate_relation(const TautRelation& rel, const ThetaValueOracle& oracle);

/// Treat (g, psi) as the single unknown entry, require the relation to be
/// linear in it, and return the value forcing evaluate_relation == 0.
LambdaPoly solve_theta(const TautRelation& rel, int unknown_g, std::vector<int> unknown_psi,
                       const ThetaValueOracle& oracle);

/// One aggregated contribution of the Givental-type weighted graph sum.
struct GraphSumItem {
    std::string shape;
    ExtScalar value;
};

/// Weighted stable-graph sum computing a primary coefficient of the
/// R/T-dressed partition function with Theta-type vertex contributions:
/// leaves carry R^-1(-psi) Psi, dilaton leaves 1 - R^-1(-psi) 1, edges the
/// matching bidifferential weight, vertices Delta^{1-g-n/2} times table
/// entries (selection rule sum k = g_v - 1).
ExtScalar givental_graph_sum(int g, int n, const MatrixSeries& rinv,
                             const FrobeniusPointData& frob, const TauTable& vertex_table,
                             const std::vector<std::pair<int, int>>& legs,
                             std::vector<GraphSumItem>* breakdown = nullptr);

} // namespace thetarec

#include "thetarec/json_io.hpp"
#include "thetarec/theta.hpp"

#include <doctest.h>

using namespace thetarec;

namespace {

std::string data_path(const std::string& rel) { return std::string(THETAREC_DATA_DIR) + "/" + rel; }

/// Oracle for lambda = 3 backed by the Bessel pipeline.
ThetaValueOracle bessel3() {
    static ThetaService service(3, 8);
    return service.bessel_oracle();
}

} // namespace

TEST_CASE("stable graph basics") {
    StableGraph loop{{1}, {{0, 0}}, {}};
    CHECK(loop.total_genus() == 2);
    CHECK(loop.is_stable());
    CHECK(loop.is_connected());
    CHECK(aut_order(loop) == 2);

    StableGraph two{{1, 1}, {{0, 1}}, {}};
    CHECK(two.total_genus() == 2);
    CHECK(aut_order(two) == 2);

    StableGraph double_edge{{1, 1}, {{0, 1}, {0, 1}}, {}};
    CHECK(double_edge.total_genus() == 3);
    CHECK(aut_order(double_edge) == 4);

    StableGraph two_loops{{1}, {{0, 0}, {0, 0}}, {}};
    CHECK(aut_order(two_loops) == 8);

    StableGraph chain{{1, 1, 1}, {{0, 1}, {1, 2}}, {}};
    CHECK(aut_order(chain) == 2);

    // legs are fixed pointwise
    StableGraph legged{{1, 1}, {{0, 1}}, {0}};
    CHECK(aut_order(legged) == 1);
}

TEST_CASE("enumeration counts") {
    auto g03 = enumerate_stable_graphs(0, 3);
    CHECK(g03.size() == 1);
    CHECK(g03[0].second == 1);

    auto g11 = enumerate_stable_graphs(1, 1);
    REQUIRE(g11.size() == 2);
    for (auto& [graph, aut] : g11) {
        if (graph.num_vertices() == 1 && graph.edges.empty()) CHECK(aut == 1);
        else CHECK(aut == 2); // genus-0 vertex with a loop
    }

    // The seven strata of genus 2 without marked points.
    auto g20 = enumerate_stable_graphs(2, 0);
    CHECK(g20.size() == 7);

    bool found_two_vertices = false, found_loop = false;
    for (auto& [graph, aut] : g20) {
        if (graph.genus == std::vector<int>{1, 1} && graph.edges.size() == 1) {
            found_two_vertices = true;
            CHECK(aut == 2);
        }
        if (graph.genus == std::vector<int>{1} && graph.edges.size() == 1) {
            found_loop = true;
            CHECK(aut == 2);
        }
    }
    CHECK(found_two_vertices);
    CHECK(found_loop);
}

TEST_CASE("automorphism counts agree with brute force") {
    for (auto [g, n] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 0}, {2, 1}, {3, 0}}) {
        for (auto& [graph, aut] : enumerate_stable_graphs(g, n)) {
            if (graph.num_vertices() > 4) continue;
            CHECK(aut == aut_order_brute_force(graph));
        }
    }
}

TEST_CASE("kappa_to_psi") {
    auto oracle = bessel3();
    // int Theta_2 kappa_1 = int Theta_{2,1} psi_1 = 3/128
    auto v = kappa_to_psi(2, {}, {1}, oracle);
    REQUIRE(v.has_value());
    CHECK(v->constant() == Rational(3, 128));
    // kappa_0 = 2g - 2 + n via the push-forward convention
    auto k0 = kappa_to_psi(1, {0}, {0}, oracle);
    REQUIRE(k0.has_value());
    CHECK(k0->constant() == Rational(1, 8)); // (2g-2+n) * 1/8 = 1 * 1/8
    // two kappa classes: kappa_1^2 on M_3-bar = R_(1,1) - R_(2):
    // int Theta_3 kappa_1^2 = int Theta_{3,2} psi psi - int Theta_{3,1} psi^2
    auto k11 = kappa_to_psi(3, {}, {1, 1}, oracle);
    REQUIRE(k11.has_value());
    CHECK(k11->constant() == Rational(63, 512) - Rational(15, 1024));
}

TEST_CASE("genus-2 relation evaluates to zero and solves") {
    TautRelation rel = load_relation_file(data_path("relations/genus2_kappa1.json"));
    auto oracle = bessel3();
    CHECK(evaluate_relation(rel, oracle).is_zero());

    // lambda-generic solve from the relations seed
    RelationsTable table;
    table.extend_by_dilaton(1, 4);
    LambdaPoly generic = solve_theta(rel, 2, {1}, table.oracle());
    // (7 lambda^2 + 24 lambda)/5760
    CHECK(generic.coeff(2) == Rational(7, 5760));
    CHECK(generic.coeff(1) == Rational(24, 5760));
    CHECK(generic.coeff(0) == Rational(0));
    CHECK(generic.at(Rational(3)) == Rational(3, 128));
}

TEST_CASE("lambda_1 divisor expression") {
    TautRelation rel = load_relation_file(data_path("relations/lambda1_genus2.json"));
    auto oracle = bessel3();
    CHECK(evaluate_relation(rel, oracle).constant() == Rational(1, 128));
}

TEST_CASE("genus-3 relations") {
    RelationsTable table;
    table.extend_by_dilaton(1, 8);
    TautRelation g2 = load_relation_file(data_path("relations/genus2_kappa1.json"));
    table.solve_and_insert(g2, 2, {1}, 8);

    TautRelation g3a = load_relation_file(data_path("relations/genus3_kappa2.json"));
    table.solve_and_insert(g3a, 3, {2}, 8);
    CHECK(table.entry(3, {2})->at(Rational(3)) == Rational(15, 1024));

    // the intermediate -357/1024: value of the boundary part of the second
    // relation, i.e. 7 (<psi^2 psi_0> - <psi psi>) after solving
    TautRelation g3b = load_relation_file(data_path("relations/genus3_m32.json"));
    table.solve_and_insert(g3b, 3, {1, 1}, 8);
    CHECK(table.entry(3, {1, 1})->at(Rational(3)) == Rational(63, 512));
    Rational intermediate = (table.entry(3, {2, 0})->at(Rational(3)) -
                             table.entry(3, {1, 1})->at(Rational(3))) * Rational(7);
    CHECK(intermediate == Rational(-357, 1024));

    CHECK(evaluate_relation(g3b, table.oracle()).is_zero());
}

TEST_CASE("solve_theta error paths") {
    TautRelation rel = load_relation_file(data_path("relations/genus2_kappa1.json"));
    RelationsTable table;
    // wrong unknown: not present in the relation
    CHECK_THROWS_AS(solve_theta(rel, 3, {2}, table.oracle()), std::domain_error);
}

TEST_CASE("givental graph sum reproduces the residue fixtures") {
    AnalyzedCurve curve(SpectralCurve::a2(), 26);
    auto [rinv, r] = laplace_bergman(curve, 8);
    auto frob = FrobeniusPointData::a2();

    auto bessel = []() {
        auto a = std::make_shared<AnalyzedCurve>(SpectralCurve::bessel(), 26);
        CorrelatorEngine engine(a);
        return assemble_tau_table(engine, SelectionRule::bgw, 3, 6);
    }();

    // (g,n) = (1,1), primary flat leg alpha = 1: 2^g * 1/8 = 1/4.
    ExtScalar v11 = givental_graph_sum(1, 1, rinv, frob, bessel, {{1, 0}});
    CHECK(v11 == ExtScalar(Rational(1, 4)));

    // (g,n) = (2,1): the four contributions 5/1536 - 15/1536 + 7/2304 + 1/288 = 0.
    std::vector<GraphSumItem> breakdown;
    ExtScalar v21 = givental_graph_sum(2, 1, rinv, frob, bessel, {{1, 0}}, &breakdown);
    CHECK(v21.is_zero());
    std::vector<Rational> expected{Rational(5, 1536), Rational(-15, 1536), Rational(7, 2304),
                                   Rational(1, 288)};
    REQUIRE(breakdown.size() == 4);
    std::vector<bool> matched(4, false);
    for (const auto& item : breakdown) {
        REQUIRE(item.value.is_rational());
        for (size_t j = 0; j < expected.size(); ++j) {
            if (!matched[j] && item.value.rational_part() == expected[j]) {
                matched[j] = true;
                break;
            }
        }
    }
    for (bool m : matched) CHECK(m);

    // all-zero vertex table gives zero
    TauTable zero_table(SelectionRule::bgw, "zero");
    zero_table.set_range(3, 6);
    CHECK(givental_graph_sum(1, 1, rinv, frob, zero_table, {{1, 0}}).is_zero());
}

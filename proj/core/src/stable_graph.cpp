#include "thetarec/stable_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace thetarec {

Rational LambdaPoly::at(const Rational& lambda_value) const {
    Rational acc(0);
    for (int k = degree(); k >= 0; --k) acc = acc * lambda_value + c_[k];
    return acc;
}

Rational LambdaPoly::constant() const {
    if (!is_constant()) throw std::domain_error("LambdaPoly: value is not constant in lambda: " + to_string());
    return coeff(0);
}

LambdaPoly LambdaPoly::operator-() const {
    LambdaPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

LambdaPoly operator+(const LambdaPoly& a, const LambdaPoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (size_t k = 0; k < c.size(); ++k) {
        if (k < a.c_.size()) c[k] += a.c_[k];
        if (k < b.c_.size()) c[k] += b.c_[k];
    }
    return LambdaPoly(std::move(c));
}

LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b) { return a + (-b); }

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
    if (a.is_zero() || b.is_zero()) return LambdaPoly();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return LambdaPoly(std::move(c));
}

LambdaPoly LambdaPoly::scaled(const Rational& r) const {
    if (r.is_zero()) return LambdaPoly();
    LambdaPoly out = *this;
    for (auto& x : out.c_) x *= r;
    return out;
}

std::string LambdaPoly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int k = 0; k <= degree(); ++k) {
        if (c_[k].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += c_[k].to_string();
        if (k >= 1) s += "*lambda" + (k > 1 ? "^" + std::to_string(k) : "");
    }
    return s;
}

int StableGraph::total_genus() const {
    return std::accumulate(genus.begin(), genus.end(), 0) + first_betti();
}

std::vector<int> StableGraph::valences() const {
    std::vector<int> val(num_vertices(), 0);
    for (auto [u, v] : edges) { val[u] += 1; val[v] += 1; }
    for (int v : legs) val[v] += 1;
    return val;
}

bool StableGraph::is_connected() const {
    int n = num_vertices();
    if (n == 0) return false;
    std::vector<int> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [a, b] : edges) {
            int other = -1;
            if (a == v) other = b;
            else if (b == v) other = a;
            if (other >= 0 && !seen[other]) { seen[other] = 1; stack.push_back(other); }
        }
    }
    return std::accumulate(seen.begin(), seen.end(), 0) == n;
}

bool StableGraph::is_stable() const {
    auto val = valences();
    for (int v = 0; v < num_vertices(); ++v) {
        if (genus[v] < 0) return false;
        if (2 * genus[v] - 2 + val[v] <= 0) return false;
    }
    return true;
}

namespace {

/// Multi-edge and loop counts keyed on normalized pairs.
std::map<std::pair<int, int>, int> edge_counts(const StableGraph& g) {
    std::map<std::pair<int, int>, int> m;
    for (auto [u, v] : g.edges) m[{std::min(u, v), std::max(u, v)}] += 1;
    return m;
}

long factorial(int n) {
    long f = 1;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

} // namespace

long aut_order(const StableGraph& g) {
    int n = g.num_vertices();
    auto counts = edge_counts(g);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long total = 0;
    do {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v)
            if (g.genus[perm[v]] != g.genus[v]) ok = false;
        for (int leg : g.legs)
            if (ok && perm[leg] != leg) ok = false;
        if (ok) {
            for (const auto& [e, c] : counts) {
                auto key = std::make_pair(std::min(perm[e.first], perm[e.second]),
                                          std::max(perm[e.first], perm[e.second]));
                auto it = counts.find(key);
                if (it == counts.end() || it->second != c) { ok = false; break; }
            }
        }
        if (ok) {
            long half_edge = 1;
            for (const auto& [e, c] : counts) {
                half_edge *= factorial(c);
                if (e.first == e.second) {
                    for (int j = 0; j < c; ++j) half_edge *= 2;
                }
            }
            total += half_edge;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

long aut_order_brute_force(const StableGraph& g) {
    // Half-edge model: half-edges 2e, 2e+1 per edge e plus one per leg.
    int n = g.num_vertices();
    int he = 2 * (int)g.edges.size();
    std::vector<int> vertex_of(he);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        vertex_of[2 * e] = g.edges[e].first;
        vertex_of[2 * e + 1] = g.edges[e].second;
    }
    // Enumerate vertex permutations and half-edge bijections compatible with
    // incidence and the edge involution.
    std::vector<int> vperm(n);
    std::iota(vperm.begin(), vperm.end(), 0);
    long total = 0;
    do {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v)
            if (g.genus[vperm[v]] != g.genus[v]) ok = false;
        for (int leg : g.legs)
            if (ok && vperm[leg] != leg) ok = false;
        if (!ok) continue;
        // Count bijections of half-edges commuting with the involution and
        // sending fibers over v to fibers over vperm[v].
        std::vector<int> hperm(he, -1);
        std::function<long(int)> count = [&](int h) -> long {
            if (h == he) return 1;
            if (hperm[h] != -1) return count(h + 1);
            long acc = 0;
            int mate = h ^ 1;
            for (int t = 0; t < he; ++t) {
                if (vertex_of[t] != vperm[vertex_of[h]]) continue;
                bool used = false;
                for (int x = 0; x < he; ++x)
                    if (hperm[x] == t) used = true;
                if (used) continue;
                int tmate = t ^ 1;
                if (hperm[mate] == -1) {
                    if (vertex_of[tmate] != vperm[vertex_of[mate]]) continue;
                    bool tused = false;
                    for (int x = 0; x < he; ++x)
                        if (hperm[x] == tmate) tused = true;
                    if (tused || tmate == t) { if (tmate == t) continue; else continue; }
                    hperm[h] = t;
                    hperm[mate] = tmate;
                    acc += count(h + 1);
                    hperm[h] = -1;
                    hperm[mate] = -1;
                } else {
                    if (hperm[mate] == tmate) {
                        hperm[h] = t;
                        acc += count(h + 1);
                        hperm[h] = -1;
                    }
                }
            }
            return acc;
        };
        total += count(0);
    } while (std::next_permutation(vperm.begin(), vperm.end()));
    return total;
}

std::vector<std::pair<StableGraph, long>> enumerate_stable_graphs(int g, int n) {
    if (2 * g - 2 + n <= 0) throw std::invalid_argument("enumerate_stable_graphs: need 2g-2+n > 0");
    std::vector<std::pair<StableGraph, long>> out;
    std::set<std::tuple<std::vector<int>, std::vector<std::pair<int, int>>, std::vector<int>>> seen;

    int vmax = 2 * g - 2 + n;
    for (int V = 1; V <= vmax; ++V) {
        // genus assignments summing to at most g
        std::vector<int> gv(V, 0);
        std::function<void(int, int)> assign = [&](int v, int remaining) {
            if (v == V) {
                int b1 = remaining;
                int E = b1 + V - 1;
                // enumerate edge multisets of size E over vertex pairs
                std::vector<std::pair<int, int>> pairs;
                for (int a = 0; a < V; ++a)
                    for (int b = a; b < V; ++b) pairs.emplace_back(a, b);
                std::vector<std::pair<int, int>> edges;
                std::function<void(size_t, int)> pick = [&](size_t idx, int left) {
                    if (left == 0) {
                        // legs
                        std::vector<int> legs(n, 0);
                        std::function<void(int)> legrec = [&](int j) {
                            if (j == n) {
                                StableGraph cand{gv, edges, legs};
                                if (cand.total_genus() != g) return;
                                if (!cand.is_connected() || !cand.is_stable()) return;
                                // canonical form over genus-preserving relabelings
                                std::vector<int> perm(V);
                                std::iota(perm.begin(), perm.end(), 0);
                                std::tuple<std::vector<int>, std::vector<std::pair<int, int>>, std::vector<int>> best;
                                bool have = false;
                                do {
                                    std::vector<int> pg(V);
                                    for (int x = 0; x < V; ++x) pg[perm[x]] = gv[x];
                                    std::vector<std::pair<int, int>> pe;
                                    for (auto [a, b] : edges)
                                        pe.emplace_back(std::min(perm[a], perm[b]), std::max(perm[a], perm[b]));
                                    std::sort(pe.begin(), pe.end());
                                    std::vector<int> pl(n);
                                    for (int x = 0; x < n; ++x) pl[x] = perm[legs[x]];
                                    auto key = std::make_tuple(std::move(pg), std::move(pe), std::move(pl));
                                    if (!have || key < best) { best = std::move(key); have = true; }
                                } while (std::next_permutation(perm.begin(), perm.end()));
                                if (seen.insert(best).second) {
                                    StableGraph canon{std::get<0>(best), std::get<1>(best), std::get<2>(best)};
                                    out.emplace_back(canon, aut_order(canon));
                                }
                                return;
                            }
                            for (int v2 = 0; v2 < V; ++v2) {
                                legs[j] = v2;
                                legrec(j + 1);
                            }
                        };
                        legrec(0);
                        return;
                    }
                    if (idx == pairs.size()) return;
                    // use pairs[idx] 0..left times
                    for (int c = 0; c <= left; ++c) {
                        for (int t = 0; t < c; ++t) edges.push_back(pairs[idx]);
                        pick(idx + 1, left - c);
                        for (int t = 0; t < c; ++t) edges.pop_back();
                    }
                };
                pick(0, E);
                return;
            }
            for (int x = 0; x <= remaining; ++x) {
                gv[v] = x;
                assign(v + 1, remaining - x);
            }
        };
        assign(0, g);
    }
    return out;
}

namespace {

/// Set partitions of {0..n-1}.
std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> current;
    std::function<void(int)> rec = [&](int item) {
        if (item == n) {
            out.push_back(current);
            return;
        }
        for (auto& block : current) {
            block.push_back(item);
            rec(item + 1);
            block.pop_back();
        }
        current.push_back({item});
        rec(item + 1);
        current.pop_back();
    };
    rec(0);
    return out;
}

std::string missing_entry_message(int g, const std::vector<int>& psi) {
    std::string s = "missing Theta entry (g=" + std::to_string(g) + ", psi=[";
    for (size_t j = 0; j < psi.size(); ++j) s += (j ? "," : "") + std::to_string(psi[j]);
    return s + "])";
}

} // namespace

std::optional<LambdaPoly> kappa_to_psi(int g, const std::vector<int>& psi,
                                       const std::vector<int>& kappa,
                                       const ThetaValueOracle& oracle) {
    if (kappa.empty()) {
        std::vector<int> key = psi;
        std::sort(key.begin(), key.end());
        return oracle(g, key);
    }
    LambdaPoly total;
    for (const auto& partition : set_partitions((int)kappa.size())) {
        Rational c(1);
        std::vector<int> key = psi;
        for (const auto& block : partition) {
            int sz = (int)block.size();
            c *= Rational(((sz - 1) % 2 == 0 ? 1 : -1) * factorial(sz - 1));
            int sum = 0;
            for (int idx : block) sum += kappa[idx];
            key.push_back(sum);
        }
        std::sort(key.begin(), key.end());
        auto v = oracle(g, key);
        if (!v) return std::nullopt;
        total = total + v->scaled(c);
    }
    return total;
}

namespace {

/// Per-vertex psi exponents of a graph term, and the vertex integral.
std::optional<LambdaPoly> vertex_value(const GraphTerm& term, int v, const ThetaValueOracle& oracle) {
    if (term.graph.genus[v] == 0) return LambdaPoly(); // Theta_{0,n} = 0
    std::vector<int> psi = term.psi.empty() ? std::vector<int>{} : term.psi[v];
    psi.resize(term.graph.valence(v), 0);
    std::vector<int> kappa = term.kappa.empty() ? std::vector<int>{} : term.kappa[v];
    return kappa_to_psi(term.graph.genus[v], psi, kappa, oracle);
}

} // namespace

LambdaPoly evaluate_relation(const TautRelation& rel, const ThetaValueOracle& oracle) {
    LambdaPoly total;
    for (const GraphTerm& term : rel.graph_terms) {
        LambdaPoly prod(Rational(1));
        bool zero = false;
        for (int v = 0; v < term.graph.num_vertices() && !zero; ++v) {
            auto val = vertex_value(term, v, oracle);
            if (!val) throw std::domain_error("evaluate_relation: oracle entry missing in term of " + rel.name);
            if (val->is_zero()) zero = true;
            else prod = prod * *val;
        }
        if (zero) continue;
        total = total + prod.scaled(term.coeff / Rational(aut_order(term.graph)));
    }
    for (const ReducedTerm& term : rel.reduced_terms) {
        LambdaPoly prod(Rational(1));
        bool zero = false;
        for (const auto& f : term.factors) {
            std::vector<int> key = f.psi;
            std::sort(key.begin(), key.end());
            if (f.g == 0) { zero = true; break; }
            auto val = oracle(f.g, key);
            if (!val) throw std::domain_error("evaluate_relation: " + missing_entry_message(f.g, key));
            if (val->is_zero()) { zero = true; break; }
            prod = prod * *val;
        }
        if (zero) continue;
        total = total + prod.scaled(term.coeff / Rational(term.aut));
    }
    return total;
}

LambdaPoly solve_theta(const TautRelation& rel, int unknown_g, std::vector<int> unknown_psi,
                       const ThetaValueOracle& oracle) {
    std::sort(unknown_psi.begin(), unknown_psi.end());
    // Track linearity in the unknown: values are pairs (a, b) = a + b X.
    struct Lin {
        LambdaPoly a, b;
    };
    auto linear_oracle = [&](int g, const std::vector<int>& psi) -> std::optional<Lin> {
        if (g == unknown_g && psi == unknown_psi) return Lin{LambdaPoly(), LambdaPoly(Rational(1))};
        auto v = oracle(g, psi);
        if (!v) return std::nullopt;
        return Lin{*v, LambdaPoly()};
    };
    auto lin_mul = [&](const Lin& x, const Lin& y) {
        if (!x.b.is_zero() && !y.b.is_zero())
            throw std::domain_error("solve_theta: relation is quadratic in the unknown entry");
        return Lin{x.a * y.a, x.a * y.b + x.b * y.a};
    };

    Lin total{LambdaPoly(), LambdaPoly()};
    auto add_term = [&](Lin prod, const Rational& scale) {
        total.a = total.a + prod.a.scaled(scale);
        total.b = total.b + prod.b.scaled(scale);
    };

    auto kappa_lin = [&](int g, std::vector<int> psi, const std::vector<int>& kappa) -> std::optional<Lin> {
        if (kappa.empty()) {
            std::sort(psi.begin(), psi.end());
            return linear_oracle(g, psi);
        }
        Lin acc{LambdaPoly(), LambdaPoly()};
        for (const auto& partition : set_partitions((int)kappa.size())) {
            Rational c(1);
            std::vector<int> key = psi;
            for (const auto& block : partition) {
                int sz = (int)block.size();
                c *= Rational(((sz - 1) % 2 == 0 ? 1 : -1) * factorial(sz - 1));
                int sum = 0;
                for (int idx : block) sum += kappa[idx];
                key.push_back(sum);
            }
            std::sort(key.begin(), key.end());
            auto v = linear_oracle(g, key);
            if (!v) return std::nullopt;
            acc.a = acc.a + v->a.scaled(c);
            acc.b = acc.b + v->b.scaled(c);
        }
        return acc;
    };

    for (const GraphTerm& term : rel.graph_terms) {
        Lin prod{LambdaPoly(Rational(1)), LambdaPoly()};
        bool zero = false;
        for (int v = 0; v < term.graph.num_vertices() && !zero; ++v) {
            if (term.graph.genus[v] == 0) { zero = true; break; }
            std::vector<int> psi = term.psi.empty() ? std::vector<int>{} : term.psi[v];
            psi.resize(term.graph.valence(v), 0);
            std::vector<int> kappa = term.kappa.empty() ? std::vector<int>{} : term.kappa[v];
            auto val = kappa_lin(term.graph.genus[v], psi, kappa);
            if (!val) throw std::domain_error("solve_theta: oracle entry missing in term of " + rel.name);
            prod = lin_mul(prod, *val);
        }
        if (zero) continue;
        add_term(prod, term.coeff / Rational(aut_order(term.graph)));
    }
    for (const ReducedTerm& term : rel.reduced_terms) {
        Lin prod{LambdaPoly(Rational(1)), LambdaPoly()};
        bool zero = false;
        for (const auto& f : term.factors) {
            if (f.g == 0) { zero = true; break; }
            std::vector<int> key = f.psi;
            std::sort(key.begin(), key.end());
            auto val = linear_oracle(f.g, key);
            if (!val) throw std::domain_error("solve_theta: " + missing_entry_message(f.g, key));
            prod = lin_mul(prod, *val);
        }
        if (zero) continue;
        add_term(prod, term.coeff / Rational(term.aut));
    }

    if (total.b.is_zero())
        throw std::domain_error("solve_theta: the unknown entry does not appear in the relation");
    if (!total.b.is_constant())
        throw std::domain_error("solve_theta: unknown appears with a lambda-dependent coefficient");
    Rational b = total.b.constant();
    return (-total.a).scaled(b.inverse());
}

ExtScalar givental_graph_sum(int g, int n, const MatrixSeries& rinv,
                             const FrobeniusPointData& frob, const TauTable& vertex_table,
                             const std::vector<std::pair<int, int>>& legs,
                             std::vector<GraphSumItem>* breakdown) {
    if ((int)legs.size() != n)
        throw std::invalid_argument("givental_graph_sum: need one (alpha, k) per leg");
    const int N = frob.size;
    int order = rinv.order() - 1;

    // Leaf, dilaton-leaf and edge weights with the z -> -z normalization that
    // matches the residue pipeline: A(z) = R^-1(-z).
    auto a_mat = [&](int m) {
        Mat a = rinv.at(m);
        if (m % 2 == 1) a = mat_scaled(a, ExtScalar(Rational(-1)));
        return a;
    };
    std::vector<Mat> leaf(order + 1);   // A_m Psi
    for (int m = 0; m <= order; ++m) leaf[m] = mat_mul(a_mat(m), frob.psi);
    std::vector<std::vector<ExtScalar>> dil(order + 1); // [z^m](1 - A(z) unit)
    for (int m = 0; m <= order; ++m) {
        auto v = mat_apply(a_mat(m), frob.sqrt_delta);
        dil[m].resize(N);
        for (int i = 0; i < N; ++i) dil[m][i] = (m == 0 ? frob.sqrt_delta[i] : ExtScalar()) - v[i];
    }
    auto e_raw = edge_weight(rinv, order);
    auto edge_mat = [&](int a, int b) {
        Mat m = e_raw[a][b];
        if ((a + b) % 2 == 0) m = mat_scaled(m, ExtScalar(Rational(-1)));
        return m;
    };

    ExtScalar total;
    for (const auto& [graph, aut] : enumerate_stable_graphs(g, n)) {
        bool has_genus0 = false;
        for (int gv : graph.genus) has_genus0 |= (gv == 0);
        if (has_genus0) continue;

        const int V = graph.num_vertices();
        const int E = (int)graph.edges.size();

        // Slot layout per vertex: edge ends (edge index order), then legs.
        std::vector<std::vector<int>> vertex_ends(V); // indices into end-power array
        std::vector<std::vector<int>> vertex_legs(V);
        for (int e = 0; e < E; ++e) {
            vertex_ends[graph.edges[e].first].push_back(2 * e);
            vertex_ends[graph.edges[e].second].push_back(2 * e + 1);
        }
        for (int l = 0; l < n; ++l) vertex_legs[graph.legs[l]].push_back(l);

        // Dilaton multisets per vertex: nonincreasing powers >= 1, sum <= g_v - 1.
        auto dilaton_choices = [](int gv) {
            std::vector<std::pair<std::vector<int>, Rational>> out; // (powers, prod 1/mult!)
            std::vector<int> current;
            std::function<void(int, int)> gen = [&](int maxp, int left) {
                Rational mult(1);
                int run = 1;
                for (size_t j = 1; j <= current.size(); ++j) {
                    if (j < current.size() && current[j] == current[j - 1]) ++run;
                    else { mult *= Rational(factorial(run)); run = 1; }
                }
                out.emplace_back(current, mult.inverse());
                for (int p = std::min(maxp, left); p >= 1; --p) {
                    current.push_back(p);
                    gen(p, left - p);
                    current.pop_back();
                }
            };
            gen(gv - 1, gv - 1);
            return out;
        };
        std::vector<std::vector<std::pair<std::vector<int>, Rational>>> dchoices(V);
        for (int v = 0; v < V; ++v) dchoices[v] = dilaton_choices(graph.genus[v]);

        // Accumulate per dilaton-leaf count for the breakdown.
        std::map<int, ExtScalar> by_dilaton_count;

        std::vector<int> dsel(V, 0);
        std::function<void(int)> dconfig_loop = [&](int v) {
            if (v < V) {
                for (dsel[v] = 0; dsel[v] < (int)dchoices[v].size(); ++dsel[v]) dconfig_loop(v + 1);
                return;
            }
            Rational dil_mult(1);
            int dilaton_total = 0;
            for (int w = 0; w < V; ++w) {
                dil_mult *= dchoices[w][dsel[w]].second;
                dilaton_total += (int)dchoices[w][dsel[w]].first.size();
            }

            ExtScalar config_total;
            std::vector<int> idx(V, 0);
            std::vector<int> end_power(2 * E, 0);
            std::function<void(int, ExtScalar)> per_vertex = [&](int w, ExtScalar acc) {
                if (w == V) {
                    ExtScalar val = acc;
                    for (int e = 0; e < E && !val.is_zero(); ++e) {
                        auto [a, b] = graph.edges[e];
                        val *= edge_mat(end_power[2 * e], end_power[2 * e + 1])[idx[a]][idx[b]];
                    }
                    config_total += val;
                    return;
                }
                const std::vector<int>& dpowers = dchoices[w][dsel[w]].first;
                int budget = graph.genus[w] - 1;
                for (int p : dpowers) budget -= p;
                if (budget < 0) return;
                int nends = (int)vertex_ends[w].size();
                int nlegs = (int)vertex_legs[w].size();
                int nslots = nends + nlegs;
                std::vector<int> powers(nslots, 0);
                std::function<void(int, int)> distribute = [&](int pos, int left) {
                    if (pos < nslots) {
                        for (int p = 0; p <= left; ++p) {
                            powers[pos] = p;
                            distribute(pos + 1, left - p);
                        }
                        return;
                    }
                    if (left != 0) return;
                    // vertex table entry over all slot powers (selection rule built in)
                    std::vector<int> ks = powers;
                    for (int p : dpowers) ks.push_back(p);
                    auto entry = vertex_table.entry(graph.genus[w], ks);
                    if (!entry)
                        throw std::domain_error("givental_graph_sum: vertex table does not cover g=" +
                                                std::to_string(graph.genus[w]) + ", n=" +
                                                std::to_string(ks.size()));
                    if (entry->is_zero()) return;

                    for (int i = 0; i < N; ++i) {
                        ExtScalar acc2 = acc * ExtScalar(*entry);
                        // TFT normalization Delta^{1-g-n/2} = sqrt_delta^{2-2g-n}
                        int expo = 2 - 2 * graph.genus[w] - (int)ks.size();
                        ExtScalar delta_pow(1);
                        for (int t = 0; t < std::abs(expo); ++t) delta_pow *= frob.sqrt_delta[i];
                        if (expo < 0) delta_pow = delta_pow.inverse();
                        acc2 *= delta_pow;
                        // leg weights [A_{p-k} Psi]^{i}_{alpha}
                        for (int j = 0; j < nlegs && !acc2.is_zero(); ++j) {
                            int l = vertex_legs[w][j];
                            int p = powers[nends + j];
                            auto [alpha, k] = legs[l];
                            if (p < k || p - k > order) { acc2 = ExtScalar(); break; }
                            acc2 *= leaf[p - k][i][alpha - 1];
                        }
                        // dilaton-leaf weights
                        for (int p : dpowers) {
                            if (acc2.is_zero()) break;
                            if (p > order) { acc2 = ExtScalar(); break; }
                            acc2 *= dil[p][i];
                        }
                        if (acc2.is_zero()) continue;
                        for (int j = 0; j < nends; ++j) end_power[vertex_ends[w][j]] = powers[j];
                        idx[w] = i;
                        per_vertex(w + 1, acc2);
                    }
                };
                distribute(0, budget);
            };
            per_vertex(0, ExtScalar(1));
            if (!config_total.is_zero())
                by_dilaton_count[dilaton_total] += config_total * ExtScalar(dil_mult);
        };
        dconfig_loop(0);

        for (const auto& [dcount, value] : by_dilaton_count) {
            ExtScalar contribution = value * ExtScalar(Rational(1, (long long)aut));
            total += contribution;
            if (breakdown && !contribution.is_zero()) {
                std::string shape = "g=[";
                for (int v = 0; v < V; ++v) shape += (v ? "," : "") + std::to_string(graph.genus[v]);
                shape += "], E=" + std::to_string(E) + ", dilaton=" + std::to_string(dcount);
                breakdown->push_back({shape, contribution});
            }
        }
    }
    return total;
}

} // namespace thetarec

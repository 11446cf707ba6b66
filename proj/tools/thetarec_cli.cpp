#include "thetarec/json_io.hpp"
#include "thetarec/theta.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace thetarec;

namespace {

int default_order(int g, int n) { return 6 * g + 2 * n + 8; }

/// Retry with a deeper truncation when a series runs out of guaranteed order.
template <typename F>
auto with_order_retry(int order, F&& body) {
    for (int attempt = 0;; ++attempt) {
        try {
            return body(order);
        } catch (const TruncationError&) {
            if (attempt >= 3) throw;
            order += 8;
        }
    }
}

SpectralCurve resolve_curve(const std::string& name, const std::string& file) {
    if (!file.empty()) return load_curve_file(file);
    return SpectralCurve::builtin(name);
}

std::string cache_path(const SpectralCurve& curve, int g, int n) {
    const char* dir = std::getenv("THETAREC_CACHE_DIR");
    if (!dir || !*dir) return {};
    std::filesystem::create_directories(dir);
    return std::string(dir) + "/" + curve.name + "-g" + std::to_string(g) + "-n" + std::to_string(n) +
           ".v1.json";
}

std::shared_ptr<const Correlator> cached_correlator(CorrelatorEngine& engine, const SpectralCurve& curve,
                                                    int g, int n) {
    std::string path = cache_path(curve, g, n);
    if (!path.empty() && std::filesystem::exists(path)) {
        std::ifstream in(path);
        json j;
        in >> j;
        auto w = std::make_shared<Correlator>(correlator_from_json(j));
        engine.preload(w);
        return w;
    }
    auto w = engine.correlator(g, n);
    if (!path.empty()) {
        std::ofstream out(path);
        out << correlator_to_json(*w).dump(1) << "\n";
    }
    return w;
}

std::string plain_correlator(const Correlator& w, CorrelatorEngine& engine) {
    std::ostringstream os;
    if (w.n == 1) {
        RatFunc f = engine.to_rational(w, {});
        os << "(" << f.num().to_string() << ") / (" << f.den().to_string() << ") dz";
    } else {
        for (const auto& [labels, v] : w.terms) {
            os << v.to_string() << " *";
            for (uint32_t l : labels) {
                SlotLabel s = SlotLabel::decode(l);
                os << " V[" << s.point + 1 << "," << s.k << "]";
            }
            os << "\n";
        }
    }
    return os.str();
}

struct VerifyPrinter {
    bool all_ok = true;
    void line(const std::string& name, bool ok, const std::string& note = "") {
        std::cout << (ok ? "pass" : "FAIL") << "  " << name;
        if (!note.empty()) std::cout << "  (" << note << ")";
        std::cout << "\n";
        all_ok &= ok;
    }
};

RelationsTable build_relations_table(const std::string& data_dir, int n_max) {
    RelationsTable table;
    table.extend_by_dilaton(1, n_max);
    for (const char* file : {"genus2_kappa1.json", "genus3_kappa2.json", "genus3_m32.json"}) {
        TautRelation rel = load_relation_file(data_dir + "/relations/" + file);
        if (rel.solve_g < 0)
            throw std::runtime_error("relation file " + std::string(file) + " lacks solve_for");
        table.solve_and_insert(rel, rel.solve_g, rel.solve_psi, n_max);
    }
    return table;
}

std::string default_data_dir() {
    const char* env = std::getenv("THETAREC_DATA_DIR");
    if (env && *env) return env;
    return THETAREC_DATA_DIR_DEFAULT;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact topological recursion, KdV tau tables and Theta intersection numbers"};
    app.require_subcommand(1);

    std::string curve_name = "airy", curve_file, format = "json";
    int g = 0, n = 1, order = 0;

    // tr: correlators
    auto* tr = app.add_subcommand("tr", "compute a correlator omega_{g,n}");
    tr->add_option("--curve", curve_name, "built-in curve: airy|bessel|a2|bgw-a2");
    tr->add_option("--curve-file", curve_file, "curve definition JSON file");
    tr->add_option("--g", g, "genus")->required();
    tr->add_option("--n", n, "number of points")->required();
    tr->add_option("--order", order, "frame truncation order override");
    tr->add_option("--format", format, "json | plain");

    // tau
    int gmax = 3, nmax = 6;
    auto* tau = app.add_subcommand("tau", "tau-function coefficient tables (airy | bessel)");
    tau->add_option("--curve", curve_name, "airy | bessel")->required();
    tau->add_option("--g", g, "single entry: genus");
    std::vector<int> karg;
    tau->add_option("--k", karg, "single entry: psi indices (comma separated)")->delimiter(',');
    tau->add_option("--n", n, "single entry: number of points (all-zero k)");
    tau->add_option("--gmax", gmax, "table bound on g");
    tau->add_option("--nmax", nmax, "table bound on n");
    tau->add_option("--format", format, "json | latex");

    // theta
    std::vector<int> psi, kappa;
    std::string pipeline = "bessel", data_dir = default_data_dir();
    bool lambda_generic = false;
    auto* th = app.add_subcommand("theta", "Theta intersection numbers");
    th->add_option("--g", g, "genus")->required();
    th->add_option("--psi", psi, "psi exponents, one per marked point")->delimiter(',');
    th->add_option("--kappa", kappa, "kappa indices")->delimiter(',');
    th->add_option("--pipeline", pipeline, "bessel | relations");
    th->add_flag("--lambda-generic", lambda_generic, "polynomial in lambda via the relations pipeline");
    th->add_option("--data", data_dir, "data directory with relation fixtures");

    // rmatrix
    auto* rm = app.add_subcommand("rmatrix", "R-matrix of a curve by Laplace transform");
    rm->add_option("--curve", curve_name, "built-in curve");
    rm->add_option("--curve-file", curve_file, "curve definition JSON file");
    rm->add_option("--order", order, "series order")->default_val(4);

    // verify
    std::string suite;
    int degree = 5;
    auto* vf = app.add_subcommand("verify", "run a named verification suite");
    vf->add_option("suite", suite, "kdv | dilaton | twisted-loop | vanishing | relations | cross-pipeline")
        ->required();
    vf->add_option("--curve", curve_name, "curve for curve-bound suites");
    vf->add_option("--degree", degree, "degree bound for the kdv suite");
    vf->add_option("--data", data_dir, "data directory with relation fixtures");
    vf->add_option("--gmax", gmax, "genus bound");
    vf->add_option("--nmax", nmax, "point bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tr) {
            SpectralCurve curve = resolve_curve(curve_name, curve_file);
            if (g == 0 && n == 2) {
                // base case: the Cauchy kernel
                if (format == "plain") {
                    std::cout << "dz1 dz2 / (z1 - z2)^2\n";
                } else {
                    json j;
                    j["g"] = 0;
                    j["n"] = 2;
                    j["kernel"] = "cauchy";
                    j["form"] = "dz1 dz2 / (z1 - z2)^2";
                    std::cout << j.dump() << "\n";
                }
                return 0;
            }
            if (g == 0 && n == 1) {
                RatFunc w01 = -(curve.y * curve.x.derivative());
                if (format == "plain") std::cout << "(" << w01.to_string() << ") dz\n";
                else std::cout << json{{"g", 0}, {"n", 1}, {"rational", ratfunc_to_json(w01)}}.dump() << "\n";
                return 0;
            }
            int ord = order > 0 ? order : default_order(g, n);
            with_order_retry(ord, [&](int o) {
                auto analyzed = std::make_shared<AnalyzedCurve>(curve, o);
                CorrelatorEngine engine(analyzed);
                auto w = cached_correlator(engine, curve, g, n);
                if (format == "plain") std::cout << plain_correlator(*w, engine) << "\n";
                else std::cout << correlator_to_json(*w, &engine).dump(1) << "\n";
                return 0;
            });
            return 0;
        }

        if (*tau) {
            if (curve_name != "airy" && curve_name != "bessel")
                throw std::runtime_error("tau tables are defined for the airy and bessel curves");
            SelectionRule rule = curve_name == "airy" ? SelectionRule::kw : SelectionRule::bgw;
            bool single = tau->count("--g") > 0;
            int want_n = !karg.empty() ? (int)karg.size() : n;
            int table_g = single ? std::max(g, gmax) : gmax;
            int table_n = single ? std::max(want_n, nmax) : nmax;
            auto analyzed = std::make_shared<AnalyzedCurve>(SpectralCurve::builtin(curve_name),
                                                            default_order(table_g, table_n));
            CorrelatorEngine engine(analyzed);
            TauTable table = assemble_tau_table(engine, rule, table_g, table_n);
            if (single) {
                std::vector<int> ks = karg;
                if (ks.empty()) ks.assign(want_n, 0);
                auto e = table.entry(g, ks);
                json j;
                j["g"] = g;
                j["k"] = ks;
                j["value"] = e ? e->to_string() : "unavailable";
                std::cout << j.dump() << "\n";
            } else if (format == "latex") {
                std::cout << tau_table_to_latex(table);
            } else {
                std::cout << tau_table_to_json(table).dump(1) << "\n";
            }
            return 0;
        }

        if (*th) {
            ThetaQuery q;
            q.g = g;
            q.psi = psi;
            q.n = (int)psi.size();
            q.kappa = kappa;
            int need_n = q.n + (int)kappa.size() + 1;
            ThetaService service(std::max(3, g), std::max(6, need_n + 2 * g));
            if (pipeline == "relations" || lambda_generic)
                service.set_relations_table(build_relations_table(data_dir, need_n + 6));
            json j;
            if (lambda_generic) {
                LambdaPoly p = service.theta_lambda_generic(q);
                json coeffs = json::array();
                for (int d = 0; d <= p.degree(); ++d) coeffs.push_back(p.coeff(d).to_string());
                j["lambda_coeffs"] = coeffs;
                j["value_at_lambda_3"] = p.at(Rational(3)).to_string();
            } else {
                ThetaAnswer a = service.theta(q, pipeline);
                j["value"] = a.value.to_string();
                j["pipeline"] = a.pipeline;
                if (!a.note.empty()) j["note"] = a.note;
            }
            std::cout << j.dump() << "\n";
            return 0;
        }

        if (*rm) {
            SpectralCurve curve = resolve_curve(curve_name, curve_file);
            auto analyzed = std::make_shared<AnalyzedCurve>(curve, 2 * order + 8);
            auto [rinv, r] = laplace_bergman(*analyzed, order);
            json j;
            j["curve"] = curve.name;
            j["R"] = matrix_series_to_json(r);
            j["Rinv"] = matrix_series_to_json(rinv);
            std::cout << j.dump(1) << "\n";
            return 0;
        }

        if (*vf) {
            VerifyPrinter p;
            if (suite == "kdv") {
                if (curve_name != "airy" && curve_name != "bessel")
                    throw std::runtime_error("kdv suite runs on airy or bessel");
                SelectionRule rule = curve_name == "airy" ? SelectionRule::kw : SelectionRule::bgw;
                int table_n = degree + 5;
                auto analyzed = std::make_shared<AnalyzedCurve>(SpectralCurve::builtin(curve_name),
                                                                default_order(3, table_n));
                CorrelatorEngine engine(analyzed);
                TauTable table = assemble_tau_table(engine, rule, 3, table_n);
                auto rep = kdv_check(table, degree, 2);
                p.line("kdv " + curve_name + " degree " + std::to_string(degree), rep.passed, rep.detail);
            } else if (suite == "dilaton") {
                SpectralCurve curve = resolve_curve(curve_name, curve_file);
                auto analyzed = std::make_shared<AnalyzedCurve>(curve, default_order(gmax, nmax + 1));
                CorrelatorEngine engine(analyzed);
                for (int gg = 1; gg <= gmax; ++gg)
                    for (int nn = 1; nn <= std::min(nmax, 2); ++nn)
                        p.line("dilaton omega_{" + std::to_string(gg) + "," + std::to_string(nn) + "}",
                               engine.dilaton_check(gg, nn));
            } else if (suite == "twisted-loop") {
                SpectralCurve curve = resolve_curve(curve_name, curve_file);
                int ord = order > 0 ? order : 6;
                auto analyzed = std::make_shared<AnalyzedCurve>(curve, 2 * ord + 10);
                auto [rinv, r] = laplace_bergman(*analyzed, ord + 1);
                p.line("twisted loop R(z) R(-z)^T = I", twisted_loop_check(r));
                p.line("Laplace kernel identity", bergman_laplace_identity_check(*analyzed, rinv, ord - 1));
                if (curve.name == "a2") {
                    auto frob = FrobeniusPointData::a2();
                    p.line("flatness recursion [R_{k+1},U] = (k+V) R_k", ode_check(r, frob.u, frob.v));
                }
            } else if (suite == "vanishing") {
                SpectralCurve curve = resolve_curve(curve_name, curve_file);
                auto analyzed = std::make_shared<AnalyzedCurve>(curve, default_order(3, 2));
                CorrelatorEngine engine(analyzed);
                if (curve.name == "a2") {
                    auto w21 = engine.correlator(2, 1);
                    bool ok = true;
                    for (int m = 0; m <= 13; ++m)
                        ok &= engine.residue_pairing(*w21, {m}).is_zero();
                    p.line("Res z^m omega^{A2}_{2,1} = 0, m = 0..13", ok);
                } else if (curve.name == "bgw-a2") {
                    for (auto [gg, nn] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}, {2, 2}}) {
                        auto w = engine.correlator(gg, nn);
                        auto [orders, sum] = engine.ord_infinity(*w);
                        p.line("sum ord_inf omega_{" + std::to_string(gg) + "," + std::to_string(nn) +
                                   "} >= 2g-2",
                               sum >= 2 * gg - 2, "sum = " + std::to_string(sum));
                    }
                } else {
                    throw std::runtime_error("vanishing suite runs on a2 or bgw-a2");
                }
            } else if (suite == "relations") {
                RelationsTable table = build_relations_table(data_dir, 8);
                auto val = [&](int gg, std::vector<int> ks) {
                    auto e = table.entry(gg, std::move(ks));
                    return e ? e->at(Rational(3)) : Rational(0);
                };
                p.line("genus 2: 3/128", val(2, {1}) == Rational(3, 128));
                p.line("genus 3: 15/1024", val(3, {2}) == Rational(15, 1024));
                p.line("genus 3: 63/512", val(3, {1, 1}) == Rational(63, 512));
            } else if (suite == "cross-pipeline") {
                RelationsTable table = build_relations_table(data_dir, 8);
                ThetaService service(3, 8);
                bool ok = true;
                int compared = 0;
                for (const auto& [key, value] : table.entries()) {
                    auto b = service.bessel_table().entry(key.first, key.second);
                    if (!b) continue;
                    ++compared;
                    if (*b != value.at(Rational(3))) ok = false;
                }
                p.line("bessel vs relations tables agree on g <= 3",
                       ok && compared > 0, std::to_string(compared) + " entries compared");
            } else {
                std::cerr << "unknown suite: " << suite << "\n";
                return 2;
            }
            return p.all_ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

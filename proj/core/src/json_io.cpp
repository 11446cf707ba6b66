#include "thetarec/json_io.hpp"

#include <fstream>
#include <sstream>

namespace thetarec {

json scalar_to_json(const ExtScalar& s) {
    json j = json::object();
    for (int k = 0; k < ExtScalar::kDim; ++k) {
        if (!s.coord(k).is_zero()) j[ExtScalar::basis_name(k)] = s.coord(k).to_string();
    }
    return j;
}

ExtScalar scalar_from_json(const json& j) {
    if (j.is_string()) return ExtScalar(Rational::from_string(j.get<std::string>()));
    if (j.is_number_integer()) return ExtScalar(Rational((long long)j.get<long long>()));
    ExtScalar s;
    for (int k = 0; k < ExtScalar::kDim; ++k) {
        auto it = j.find(ExtScalar::basis_name(k));
        if (it != j.end()) s.coord(k) = Rational::from_string(it->get<std::string>());
    }
    return s;
}

json poly_to_json(const Poly& p) {
    json arr = json::array();
    for (int k = 0; k <= p.degree(); ++k) arr.push_back(scalar_to_json(p.coeff(k)));
    return arr;
}

Poly poly_from_json(const json& j) {
    std::vector<ExtScalar> coeffs;
    for (const auto& c : j) coeffs.push_back(scalar_from_json(c));
    return Poly(std::move(coeffs));
}

json ratfunc_to_json(const RatFunc& f) {
    return json{{"num", poly_to_json(f.num())}, {"den", poly_to_json(f.den())}};
}

RatFunc ratfunc_from_json(const json& j) {
    return RatFunc(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
}

json curve_to_json(const SpectralCurve& c) {
    json j;
    j["variable"] = "z";
    j["x"] = ratfunc_to_json(c.x);
    j["y"] = ratfunc_to_json(c.y);
    if (!c.branch_overrides.empty()) {
        json arr = json::array();
        for (const auto& [at, s1] : c.branch_overrides)
            arr.push_back(json{{"at", scalar_to_json(at)}, {"s1", scalar_to_json(s1)}});
        j["branch_overrides"] = arr;
    }
    return j;
}

SpectralCurve curve_from_json(const json& j) {
    SpectralCurve c;
    c.x = ratfunc_from_json(j.at("x"));
    c.y = ratfunc_from_json(j.at("y"));
    if (j.contains("branch_overrides")) {
        for (const auto& o : j.at("branch_overrides"))
            c.branch_overrides.emplace_back(scalar_from_json(o.at("at")), scalar_from_json(o.at("s1")));
    }
    if (j.contains("name")) c.name = j.at("name").get<std::string>();
    return c;
}

SpectralCurve load_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve file: " + path);
    json j;
    in >> j;
    return curve_from_json(j);
}

json correlator_to_json(const Correlator& w, const CorrelatorEngine* engine) {
    json j;
    j["g"] = w.g;
    j["n"] = w.n;
    j["basis"] = "V";
    json terms = json::array();
    for (const auto& [labels, v] : w.terms) {
        json idx = json::array();
        for (uint32_t l : labels) {
            SlotLabel s = SlotLabel::decode(l);
            idx.push_back(json::array({s.point + 1, s.k}));
        }
        terms.push_back(json{{"index", idx}, {"value", scalar_to_json(v)}});
    }
    j["terms"] = terms;
    if (w.n == 1 && engine) j["rational"] = ratfunc_to_json(engine->to_rational(w, {}));
    return j;
}

Correlator correlator_from_json(const json& j) {
    Correlator w;
    w.g = j.at("g").get<int>();
    w.n = j.at("n").get<int>();
    for (const auto& t : j.at("terms")) {
        LabelTuple labels;
        for (const auto& ik : t.at("index"))
            labels.push_back(SlotLabel{ik.at(0).get<int>() - 1, ik.at(1).get<int>(), false}.encode());
        std::sort(labels.begin(), labels.end());
        w.terms[labels] = scalar_from_json(t.at("value"));
    }
    return w;
}

json tau_table_to_json(const TauTable& t) {
    json arr = json::array();
    for (const auto& [key, value] : t.entries()) {
        json row;
        row["g"] = key.first;
        row["k"] = key.second;
        row["value"] = value.to_string();
        arr.push_back(row);
    }
    return arr;
}

std::string tau_table_to_latex(const TauTable& t) {
    std::ostringstream os;
    os << "\\begin{align*}\n";
    for (const auto& [key, value] : t.entries()) {
        os << "\\int \\Theta_{" << key.first << "," << key.second.size() << "}";
        int idx = 1;
        for (int k : key.second) {
            if (k > 0) os << "\\psi_" << idx << "^{" << k << "}";
            ++idx;
        }
        os << " &= " << value.num().str();
        if (value.den() != 1) os << "/" << value.den().str();
        os << " \\\\\n";
    }
    os << "\\end{align*}\n";
    return os.str();
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& x : row) r.push_back(scalar_to_json(x));
        rows.push_back(r);
    }
    return rows;
}

json matrix_series_to_json(const MatrixSeries& s) {
    json arr = json::array();
    for (const Mat& m : s.coeff) arr.push_back(matrix_to_json(m));
    return arr;
}

TautRelation relation_from_json(const json& j) {
    TautRelation rel;
    rel.name = j.value("name", "relation");
    rel.g = j.at("g").get<int>();
    rel.n = j.at("n").get<int>();
    if (j.contains("solve_for")) {
        rel.solve_g = j.at("solve_for").at("g").get<int>();
        rel.solve_psi = j.at("solve_for").at("psi").get<std::vector<int>>();
    }
    for (const auto& t : j.at("terms")) {
        Rational coeff = Rational::from_string(t.at("coeff").get<std::string>());
        if (t.contains("factors")) {
            ReducedTerm term;
            term.coeff = coeff;
            term.aut = t.value("aut", 1);
            for (const auto& f : t.at("factors")) {
                ReducedTerm::Factor factor;
                factor.g = f.at("g").get<int>();
                factor.psi = f.value("psi", std::vector<int>{});
                term.factors.push_back(std::move(factor));
            }
            rel.reduced_terms.push_back(std::move(term));
            continue;
        }
        GraphTerm term;
        term.coeff = coeff;
        for (const auto& v : t.at("vertices")) {
            term.graph.genus.push_back(v.at("genus").get<int>());
            term.psi.push_back(v.value("psi_on_ends", std::vector<int>{}));
            term.kappa.push_back(v.value("kappa", std::vector<int>{}));
        }
        if (t.contains("edges"))
            for (const auto& e : t.at("edges"))
                term.graph.edges.emplace_back(std::min(e.at(0).get<int>(), e.at(1).get<int>()),
                                              std::max(e.at(0).get<int>(), e.at(1).get<int>()));
        if (t.contains("legs")) {
            term.graph.legs.assign(rel.n, 0);
            for (auto it = t.at("legs").begin(); it != t.at("legs").end(); ++it)
                term.graph.legs[std::stoi(it.key()) - 1] = it.value().get<int>();
        }
        if (term.graph.total_genus() != rel.g || (int)term.graph.legs.size() != rel.n)
            throw std::runtime_error("relation " + rel.name + ": graph term has wrong ambient type");
        if (!term.graph.is_stable() || !term.graph.is_connected())
            throw std::runtime_error("relation " + rel.name + ": graph term is not a stable graph");
        rel.graph_terms.push_back(std::move(term));
    }
    return rel;
}

TautRelation load_relation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open relation file: " + path);
    json j;
    in >> j;
    return relation_from_json(j);
}

} // namespace thetarec

#include "thetarec/theta.hpp"

#include <algorithm>
#include <numeric>

namespace thetarec {

RelationsTable::RelationsTable() {
    // Theta_{1,1} = lambda psi_1 gives the seed lambda/24.
    insert(1, {0}, LambdaPoly::lambda().scaled(Rational(1, 24)));
}

void RelationsTable::insert(int g, std::vector<int> psi, LambdaPoly value) {
    std::sort(psi.begin(), psi.end());
    int sum = std::accumulate(psi.begin(), psi.end(), 0);
    if (sum != g - 1 && !value.is_zero())
        throw std::logic_error("RelationsTable: selection rule sum k = g-1 violated on insert");
    entries_[{g, std::move(psi)}] = std::move(value);
    g_max_ = std::max(g_max_, g);
}

std::optional<LambdaPoly> RelationsTable::entry(int g, std::vector<int> psi) const {
    std::sort(psi.begin(), psi.end());
    if (g == 0) return LambdaPoly();
    int sum = std::accumulate(psi.begin(), psi.end(), 0);
    if (sum != g - 1) return LambdaPoly();
    auto it = entries_.find({g, psi});
    if (it != entries_.end()) return it->second;
    return std::nullopt;
}

ThetaValueOracle RelationsTable::oracle() const {
    return [this](int g, const std::vector<int>& psi) { return entry(g, psi); };
}

void RelationsTable::extend_by_dilaton(int g, int n_max) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<std::vector<int>, LambdaPoly>> grown;
        for (const auto& [key, value] : entries_) {
            if (key.first != g) continue;
            int n = (int)key.second.size();
            if (n + 1 > n_max) continue;
            std::vector<int> child = key.second;
            child.push_back(0);
            std::sort(child.begin(), child.end());
            if (entries_.count({g, child})) continue;
            grown.emplace_back(child, value.scaled(Rational(2 * g - 2 + n)));
        }
        for (auto& [psi, value] : grown) {
            entries_[{g, psi}] = std::move(value);
            changed = true;
        }
    }
}

void RelationsTable::solve_and_insert(const TautRelation& rel, int unknown_g,
                                      std::vector<int> unknown_psi, int n_max) {
    LambdaPoly value = solve_theta(rel, unknown_g, unknown_psi, oracle());
    insert(unknown_g, unknown_psi, std::move(value));
    extend_by_dilaton(unknown_g, n_max);
}

ThetaService::ThetaService(int g_max, int n_max, bool auto_extend)
    : bessel_table_(SelectionRule::bgw, "bessel"), auto_extend_(auto_extend) {
    int order = 6 * g_max + 2 * n_max + 4;
    curve_ = std::make_shared<AnalyzedCurve>(SpectralCurve::bessel(), order);
    engine_ = std::make_unique<CorrelatorEngine>(curve_);
    bessel_table_ = assemble_tau_table(*engine_, SelectionRule::bgw, g_max, n_max);
}

void ThetaService::ensure_bessel(int g, int n) {
    if (g <= bessel_table_.g_max() && n <= bessel_table_.n_max()) return;
    if (!auto_extend_)
        throw std::domain_error("theta: entry (g=" + std::to_string(g) + ", n=" + std::to_string(n) +
                                ") beyond the computed table and auto-extend is disabled");
    int g_max = std::max(g, bessel_table_.g_max());
    int n_max = std::max(n, bessel_table_.n_max());
    bessel_table_ = assemble_tau_table(*engine_, SelectionRule::bgw, g_max, n_max);
}

ThetaValueOracle ThetaService::bessel_oracle() {
    return [this](int g, const std::vector<int>& psi) -> std::optional<LambdaPoly> {
        ensure_bessel(g, (int)psi.size());
        auto e = bessel_table_.entry(g, psi);
        if (!e) return std::nullopt;
        return LambdaPoly(*e);
    };
}

ThetaAnswer ThetaService::theta(const ThetaQuery& query, const std::string& pipeline) {
    ThetaAnswer out;
    out.pipeline = pipeline;
    if (query.g < 0 || query.n < 0 || 2 * query.g - 2 + query.n <= 0)
        throw std::invalid_argument("theta: invalid (g,n), need 2g-2+n > 0");
    if ((int)query.psi.size() != query.n)
        throw std::invalid_argument("theta: need one psi exponent per marked point");

    int degree = std::accumulate(query.psi.begin(), query.psi.end(), 0) +
                 std::accumulate(query.kappa.begin(), query.kappa.end(), 0);
    if (query.g == 0) {
        out.value = Rational(0);
        out.note = "Theta vanishes in genus zero";
        return out;
    }
    if (degree != query.g - 1) {
        out.value = Rational(0);
        out.dimension_ok = false;
        out.note = "dimension mismatch: sum of psi and kappa degrees must be g-1";
        return out;
    }

    ThetaValueOracle oracle;
    if (pipeline == "bessel") {
        oracle = bessel_oracle();
    } else if (pipeline == "relations") {
        if (!relations_) throw std::domain_error("theta: relations pipeline not loaded");
        oracle = relations_->oracle();
    } else {
        throw std::invalid_argument("theta: unknown pipeline " + pipeline);
    }

    auto value = kappa_to_psi(query.g, query.psi, query.kappa, oracle);
    if (!value)
        throw std::domain_error("theta: required table entry not available for the " + pipeline + " pipeline");
    out.value = pipeline == "bessel" ? value->constant() : value->at(Rational(3));
    return out;
}

LambdaPoly ThetaService::theta_lambda_generic(const ThetaQuery& query) {
    if (!relations_) throw std::domain_error("theta: relations pipeline not loaded");
    if (query.g == 0) return LambdaPoly();
    int degree = std::accumulate(query.psi.begin(), query.psi.end(), 0) +
                 std::accumulate(query.kappa.begin(), query.kappa.end(), 0);
    if (degree != query.g - 1) return LambdaPoly();
    auto value = kappa_to_psi(query.g, query.psi, query.kappa, relations_->oracle());
    if (!value) throw std::domain_error("theta: required entry not available in the relations table");
    return *value;
}

std::vector<Rational> ThetaService::theta_one_table(int n_max) {
    std::vector<Rational> out;
    for (int n = 1; n <= n_max; ++n) {
        ensure_bessel(1, n);
        auto e = bessel_table_.entry(1, std::vector<int>(n, 0));
        out.push_back(e.value_or(Rational(0)));
    }
    return out;
}

Rational ThetaService::wp_volume_coefficient(int g, int n) {
    if (g < 1) throw std::invalid_argument("wp_volume_coefficient: need g >= 1");
    ThetaQuery q;
    q.g = g;
    q.n = n;
    q.psi.assign(n, 0);
    q.kappa.assign(g - 1, 1);
    return theta(q).value;
}

} // namespace thetarec

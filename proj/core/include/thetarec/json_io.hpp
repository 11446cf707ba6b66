#pragma once

#include "thetarec/recursion.hpp"
#include "thetarec/stable_graph.hpp"
#include "thetarec/tau.hpp"

#include <json.hpp>

namespace thetarec {

using json = nlohmann::ordered_json;

json scalar_to_json(const ExtScalar& s);
ExtScalar scalar_from_json(const json& j);

json poly_to_json(const Poly& p);
Poly poly_from_json(const json& j);

json ratfunc_to_json(const RatFunc& f);
RatFunc ratfunc_from_json(const json& j);

/// Curve definition file: {"variable":"z","x":{num,den},"y":{num,den},
/// "branch_overrides":[{"at":...,"s1":...}]}.
json curve_to_json(const SpectralCurve& c);
SpectralCurve curve_from_json(const json& j);
SpectralCurve load_curve_file(const std::string& path);

/// {"g":..,"n":..,"basis":"V","terms":[{"index":[[i,k]..],"value":..}],
///  "rational": {num,den}} (rational part for n = 1 only).
json correlator_to_json(const Correlator& w, const CorrelatorEngine* engine = nullptr);
Correlator correlator_from_json(const json& j);

json tau_table_to_json(const TauTable& t);
std::string tau_table_to_latex(const TauTable& t);

json matrix_to_json(const Mat& m);
json matrix_series_to_json(const MatrixSeries& s);

TautRelation relation_from_json(const json& j);
TautRelation load_relation_file(const std::string& path);

} // namespace thetarec

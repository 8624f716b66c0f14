#pragma once

// JSON forms of the library types.
//
//   NormSpec     {dim, variant: "lp"|"polyhedral"|"seminorm"|"pushforward", p?, vertices?, facets?, map?, codomain?}
//   LinOp        {matrix, domain, codomain}; norms may also be shorthand strings
//   MetricValue  {value, certificate, method, tolerance, upper_bound?}
//   FFMatrix     {p, rows, cols, entries}
//
// Matrices are arrays of rows. An infinite p is written as the string "inf".

#include <string>

#include "json.hpp"
#include "ramsey/constructions.hpp"
#include "ramsey/gf_linalg.hpp"
#include "ramsey/ramsey_engine.hpp"

namespace ramsey::io {

using json = nlohmann::ordered_json;

json to_json(const metrics::MatrixXd& m);
/// Throws Errc::Parse on ragged or non-numeric input.
metrics::MatrixXd matrix_from_json(const json& j);
metrics::VectorXd vector_from_json(const json& j);

json to_json(const metrics::NormSpec& n);
/// Accepts an object or a shorthand string. Throws Errc::Parse.
metrics::NormSpec norm_from_json(const json& j);

json to_json(const metrics::LinOp& t);
metrics::LinOp linop_from_json(const json& j);

json to_json(const metrics::MetricValue& v);

json to_json(const gf::FFMatrix& a);
gf::FFMatrix ffmatrix_from_json(const json& j);

json to_json(const engine::WitnessReport& r, bool timing = true);
json to_json(const engine::SearchOutcome& s);
json to_json(const engine::MinNResult& r);

/// Shorthand ("l1:2") or "@path" naming a JSON file. Throws Errc::Parse.
metrics::NormSpec load_norm(const std::string& arg);

}  // namespace ramsey::io

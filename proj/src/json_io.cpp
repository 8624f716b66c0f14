#include "ramsey/json_io.hpp"

#include <cmath>
#include <fstream>

namespace ramsey::io {

using metrics::MatrixXd;
using metrics::NormSpec;
using metrics::VectorXd;
using Eigen::Index;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::Parse, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && (j == "inf" || j == "infinity")) return metrics::kInf;
  bad("expected a number");
}

std::size_t count(const json& j) {
  if (!j.is_number_unsigned()) bad("expected a nonnegative integer");
  return j.get<std::size_t>();
}

json p_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

}  // namespace

json to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  if (j.empty()) return MatrixXd(0, 0);
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  MatrixXd m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) bad("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(i), static_cast<Index>(c)) = number(j[i][c]);
  }
  return m;
}

VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) bad("vector must be an array");
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i]);
  return v;
}

json to_json(const NormSpec& n) {
  json out;
  out["dim"] = n.dim();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, metrics::PNorm>) {
          out["variant"] = "lp";
          out["p"] = p_to_json(v.p);
        } else if constexpr (std::is_same_v<T, metrics::Polyhedral>) {
          if (n.is_seminorm()) {
            out["variant"] = "seminorm";
          } else {
            out["variant"] = "polyhedral";
            out["vertices"] = to_json(v.ball->vertices);
          }
          out["facets"] = to_json(v.ball->facets);
        } else {
          out["variant"] = "pushforward";
          out["map"] = to_json(v.map);
          out["codomain"] = to_json(*v.codomain);
        }
      },
      n.variant());
  return out;
}

NormSpec norm_from_json(const json& j) {
  if (j.is_string()) return metrics::parse_norm_shorthand(j.get<std::string>());
  try {
    const std::string variant = field(j, "variant").get<std::string>();
    std::optional<std::size_t> dim;
    if (j.contains("dim")) dim = count(j.at("dim"));
    auto checked = [&](NormSpec n) {
      if (dim && *dim != n.dim()) bad("dim disagrees with the norm data");
      return n;
    };
    if (variant == "lp") {
      if (!dim) bad("missing field 'dim'");
      return NormSpec::lp(*dim, number(field(j, "p")));
    }
    if (variant == "polyhedral") {
      if (j.contains("vertices")) return checked(NormSpec::from_vertices(matrix_from_json(j.at("vertices"))));
      return checked(NormSpec::from_facets(matrix_from_json(field(j, "facets"))));
    }
    if (variant == "seminorm") return checked(NormSpec::seminorm(matrix_from_json(field(j, "facets"))));
    if (variant == "pushforward")
      return checked(NormSpec::pushforward(matrix_from_json(field(j, "map")), norm_from_json(field(j, "codomain"))));
    bad("unknown norm variant '" + variant + "'");
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

json to_json(const metrics::LinOp& t) {
  json out;
  out["matrix"] = to_json(t.matrix);
  out["domain"] = to_json(t.domain);
  out["codomain"] = to_json(t.codomain);
  return out;
}

metrics::LinOp linop_from_json(const json& j) {
  metrics::LinOp t{matrix_from_json(field(j, "matrix")), norm_from_json(field(j, "domain")),
                   norm_from_json(field(j, "codomain"))};
  if (static_cast<std::size_t>(t.matrix.cols()) != t.domain.dim() ||
      static_cast<std::size_t>(t.matrix.rows()) != t.codomain.dim())
    throw Error(Errc::DimensionMismatch, "matrix shape differs from the norm dimensions");
  return t;
}

json to_json(const metrics::MetricValue& v) {
  json out;
  out["value"] = v.value;
  out["certificate"] = metrics::certificate_name(v.certificate);
  out["method"] = v.method;
  out["tolerance"] = v.tolerance;
  if (v.upper_bound) out["upper_bound"] = *v.upper_bound;
  return out;
}

json to_json(const gf::FFMatrix& a) {
  json out;
  out["p"] = a.field().order();
  out["rows"] = a.rows();
  out["cols"] = a.cols();
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  out["entries"] = std::move(rows);
  return out;
}

gf::FFMatrix ffmatrix_from_json(const json& j) {
  try {
    gf::PrimeField f(static_cast<std::uint32_t>(count(field(j, "p"))));
    const json& e = field(j, "entries");
    const std::size_t rows = count(field(j, "rows")), cols = count(field(j, "cols"));
    if (!e.is_array() || e.size() != rows) bad("entries must have one array per row");
    std::vector<gf::Residue> flat;
    for (const auto& r : e) {
      if (!r.is_array() || r.size() != cols) bad("ragged entries");
      for (const auto& x : r) flat.push_back(static_cast<gf::Residue>(count(x)));
    }
    return gf::FFMatrix(f, rows, cols, std::move(flat));
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

json to_json(const engine::WitnessReport& r, bool timing) {
  json out;
  out["found"] = r.found;
  out["witness"] = r.witness;
  json table = json::array();
  for (const auto& [code, color] : r.factor_table) table.push_back({code, color});
  out["factor_table"] = std::move(table);
  out["nodes"] = r.nodes;
  if (timing) out["millis"] = r.millis;
  return out;
}

namespace {

json coloring_json(const engine::ColoringTable& c) {
  json out;
  const auto& p = c.params();
  out["kind"] = engine::kind_name(p.kind);
  out["p"] = p.p;
  out["n"] = p.n;
  out["k"] = p.k;
  out["r"] = c.colors_count();
  json rows = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) rows.push_back({c.code(i), c.color(i)});
  out["colors"] = std::move(rows);
  return out;
}

}  // namespace

json to_json(const engine::SearchOutcome& s) {
  json out;
  out["result"] = s.all_pass ? "AllPass" : "Counterexample";
  out["exhaustive"] = s.exhaustive;
  out["colorings_checked"] = s.colorings_checked;
  if (s.counterexample) out["counterexample"] = coloring_json(*s.counterexample);
  return out;
}

json to_json(const engine::MinNResult& r) {
  json out;
  if (r.n)
    out["n"] = *r.n;
  else
    out["n"] = nullptr;
  out["result"] = r.n ? "Found" : "NotFoundInRange";
  json log = json::array();
  for (const auto& [n, outcome] : r.log) {
    json entry = to_json(outcome);
    entry.erase("counterexample");
    log.push_back({{"n", n}, {"outcome", std::move(entry)}});
  }
  out["log"] = std::move(log);
  return out;
}

NormSpec load_norm(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return metrics::parse_norm_shorthand(arg);
  std::ifstream in(arg.substr(1));
  if (!in) bad("cannot open " + arg.substr(1));
  try {
    return norm_from_json(json::parse(in));
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

}  // namespace ramsey::io

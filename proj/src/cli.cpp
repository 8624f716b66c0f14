#include "ramsey/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/verify_suite.hpp"

namespace ramsey::cli {

namespace {

using io::json;

struct Common {
  std::string input;
  std::string output;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::optional<std::uint64_t> budget;
  double tol = 1e-10;
  bool no_timing = false;
};

struct Structure {
  std::string kind = "grassmannian";
  std::uint32_t p = 2;
  std::size_t n = 0;
  std::size_t k = 1;
  std::size_t m = 2;
  std::uint32_t r = 2;
  std::string n_range;
};

[[noreturn]] void usage(const std::string& what) { throw CLI::ValidationError(what); }

std::ifstream open_input(const std::string& path) {
  if (path.empty()) usage("--input is required");
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot open " + path);
  return in;
}

json read_json(const std::string& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, e.what());
  }
}

void emit(const json& j, const Common& c, std::ostream& out) {
  if (c.output.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw Error(Errc::Parse, "cannot write " + c.output);
  f << j.dump(2) << "\n";
}

engine::SearchOptions search_options(const Common& c) {
  engine::SearchOptions o;
  o.jobs = c.jobs;
  if (c.seed) o.seed = *c.seed;
  if (c.budget) o.samples = *c.budget;
  return o;
}

engine::Params params_of(const Structure& s) {
  return {engine::parse_kind(s.kind), s.p, s.n, s.k};
}

void add_common(CLI::App* sub, Common& c, bool seeded) {
  sub->add_option("--output", c.output, "Write the result to this file");
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--no-timing", c.no_timing, "Omit timing fields");
  if (seeded) sub->add_option("--seed", c.seed, "RNG seed");
}

void add_structure(CLI::App* sub, Structure& s, bool with_n) {
  sub->add_option("--kind", s.kind, "grassmannian | full_rank | square | boolean | epi");
  sub->add_option("--p", s.p, "Field order");
  if (with_n) sub->add_option("--n", s.n, "Ambient dimension")->required();
  sub->add_option("--k", s.k, "Structure dimension");
}

int cmd_rcef(const Common& c, std::ostream& out) {
  auto in = open_input(c.input);
  const gf::FFMatrix a = gf::read_matrix(in);
  const gf::RcefResult r = gf::rcef_decompose(a);
  json j;
  j["reduced"] = io::to_json(r.reduced);
  j["tau"] = io::to_json(r.tau.matrix());
  j["right_inverse"] = io::to_json(r.right_inverse);
  emit(j, c, out);
  return kSuccess;
}

int cmd_tau2(const Common& c, std::ostream& out) {
  auto in = open_input(c.input);
  const gf::FFMatrix a = gf::read_matrix(in);
  const gf::FullRankDecomposition d = gf::full_rank_decomposition(a);
  json j;
  j["rank"] = d.left.cols();
  j["tau2"] = io::to_json(gf::tau2_from(d).matrix());
  j["left"] = io::to_json(gf::rcef_decompose(d.left).reduced);
  j["right"] = io::to_json(gf::rcef_decompose(d.right.transpose()).reduced);
  emit(j, c, out);
  return kSuccess;
}

int cmd_enumerate(const Common& c, const Structure& s, std::ostream& out) {
  const engine::Params params = params_of(s);
  const auto codes = engine::enumerate_structures(params);
  json j;
  j["kind"] = engine::kind_name(params.kind);
  j["p"] = params.p;
  j["n"] = params.n;
  j["k"] = params.k;
  j["count"] = codes.size();
  j["codes"] = codes;
  emit(j, c, out);
  return kSuccess;
}

int cmd_witness(const Common& c, const Structure& s, std::ostream& out) {
  std::optional<engine::ColoringTable> table;
  if (!c.input.empty()) {
    auto in = open_input(c.input);
    table = engine::read_coloring_csv(in);
  } else {
    if (!c.seed) usage("a random coloring needs --seed (or pass --input)");
    if (s.n == 0) usage("a random coloring needs --n");
    const engine::Params params = params_of(s);
    std::mt19937_64 rng(*c.seed);
    std::uniform_int_distribution<std::uint32_t> d(0, s.r - 1);
    std::vector<std::uint32_t> colors(engine::structure_count(params));
    for (auto& x : colors) x = d(rng);
    table = engine::ColoringTable::from_colors(params, s.r, std::move(colors));
  }
  const auto rep = engine::witness_search(*table, s.m, search_options(c));
  json j = io::to_json(rep, !c.no_timing);
  j["recheck"] = !rep.found || engine::recheck_witness(*table, s.m, rep);
  emit(j, c, out);
  return rep.found ? kSuccess : kRefuted;
}

bool randomized(const Structure& s, bool sampled) { return sampled || s.r >= 3; }

int cmd_exhaust(const Common& c, const Structure& s, bool sampled, bool canonize, std::ostream& out) {
  if (randomized(s, sampled) && !c.seed) usage("sampled search needs --seed");
  auto opts = search_options(c);
  opts.sampled = sampled;
  opts.canonize = canonize;
  const auto outcome = engine::exhaust_colorings(params_of(s), s.r, s.m, opts);
  emit(io::to_json(outcome), c, out);
  return outcome.all_pass ? kSuccess : kRefuted;
}

int cmd_min_n(const Common& c, const Structure& s, bool sampled, std::ostream& out) {
  if (randomized(s, sampled) && !c.seed) usage("sampled search needs --seed");
  std::size_t lo = 1, hi = 0;
  const auto colon = s.n_range.find(':');
  try {
    if (colon == std::string::npos) {
      hi = std::stoul(s.n_range);
    } else {
      lo = std::stoul(s.n_range.substr(0, colon));
      hi = std::stoul(s.n_range.substr(colon + 1));
    }
  } catch (const std::exception&) {
    usage("--n must be HI or LO:HI");
  }
  if (lo > hi) usage("empty --n range");
  auto opts = search_options(c);
  opts.sampled = sampled;
  const auto r = engine::min_n_search(params_of(s), s.r, s.m, lo, hi, opts);
  emit(io::to_json(r), c, out);
  return r.n ? kSuccess : kRefuted;
}

struct MetricArgs {
  std::string name;
  std::string m;
  std::string n;
  std::string x;
};

int cmd_metric(const Common& c, const MetricArgs& a, std::ostream& out) {
  using namespace metrics;
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) usage(std::string(flag) + " is required for this metric");
    return io::load_norm(v);
  };
  AscentOptions ascent;
  SampleOptions sample;
  if (c.seed) ascent.seed = sample.seed = *c.seed;
  if (c.budget) sample.samples = static_cast<int>(*c.budget);
  json j;
  if (a.name == "omega") {
    j = io::to_json(omega(need(a.m, "--m"), need(a.n, "--n"), ascent));
  } else if (a.name == "bm") {
    if (!c.seed) usage("bm needs --seed");
    BmOptions opts;
    opts.seed = *c.seed;
    if (c.budget) opts.starts = static_cast<int>(*c.budget);
    const BmResult r = bm_upper(need(a.m, "--m"), need(a.n, "--n"), opts);
    j = io::to_json(r.value);
    j["map"] = io::to_json(r.map);
  } else if (a.name == "alpha") {
    j = io::to_json(alpha_extrinsic(need(a.x, "--x"), need(a.m, "--m"), need(a.n, "--n"), sample));
  } else if (a.name == "gap") {
    const json in = read_json(c.input);
    if (!in.contains("ambient") || !in.contains("u") || !in.contains("w"))
      throw Error(Errc::Parse, "gap input needs ambient, u and w");
    const NormSpec amb = io::norm_from_json(in["ambient"]);
    j = io::to_json(gap_metric(SubspaceRep(amb, io::matrix_from_json(in["u"])),
                               SubspaceRep(amb, io::matrix_from_json(in["w"])), sample));
  } else {
    const LinOp t = io::linop_from_json(read_json(c.input));
    j["norm"] = io::to_json(op_norm(t, ascent));
    if (numerical_rank(t.matrix, c.tol) == static_cast<std::size_t>(t.matrix.cols()))
      j["inv_norm"] = io::to_json(inv_norm(t, ascent));
    else
      j["inv_norm"] = nullptr;
  }
  emit(j, c, out);
  return kSuccess;
}

int cmd_verify(const Common& c, std::vector<std::string> suites, bool all, std::ostream& out) {
  if (all) suites = verify::suite_names();
  verify::SuiteConfig cfg;
  cfg.suites = std::move(suites);
  if (!cfg.suites.empty() && !c.seed) usage("verify needs --seed");
  if (c.seed) cfg.seed = *c.seed;
  cfg.trials = c.budget;
  cfg.jobs = c.jobs;
  const auto report = verify::run_suite(cfg);
  emit(verify::to_json(report, !c.no_timing), c, out);
  return report.certified_pass() ? kSuccess : kRefuted;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ramsey factorization search and finite-dimensional norm metrics", "ramseyfac"};
  app.require_subcommand(1, 1);
  Common c;
  Structure s;
  bool sampled = false, canonize = false, all = false;
  MetricArgs metric;
  std::vector<std::string> suites;

  auto* rcef = app.add_subcommand("rcef", "Column echelon form, tau and the pivot right inverse");
  rcef->add_option("--input", c.input, "Matrix file: 'p rows cols' then rows")->required();
  add_common(rcef, c, false);

  auto* tau2 = app.add_subcommand("tau2", "GL factor of a square matrix");
  tau2->add_option("--input", c.input, "Matrix file")->required();
  add_common(tau2, c, false);

  auto* enumerate = app.add_subcommand("enumerate", "List the structure codes of a universe");
  add_structure(enumerate, s, true);
  add_common(enumerate, c, false);

  auto* witness = app.add_subcommand("witness", "Least factor witness for a coloring");
  auto* w_input = witness->add_option("--input", c.input, "Coloring CSV");
  add_structure(witness, s, false);
  witness->add_option("--n", s.n, "Ambient dimension for a random coloring");
  witness->add_option("--m", s.m, "Witness dimension")->required();
  witness->add_option("--r", s.r, "Colors for a random coloring")->check(CLI::PositiveNumber);
  add_common(witness, c, true);
  w_input->excludes(witness->get_option("--seed"));

  auto* exhaust = app.add_subcommand("exhaust", "Search every coloring for one without a witness");
  add_structure(exhaust, s, true);
  exhaust->add_option("--m", s.m, "Witness dimension")->required();
  exhaust->add_option("--r", s.r, "Number of colors")->check(CLI::PositiveNumber);
  exhaust->add_option("--budget", c.budget, "Sampled colorings");
  auto* ex_sampled = exhaust->add_flag("--sampled", sampled, "Sample colorings even for r = 2");
  auto* ex_canon = exhaust->add_flag("--canonize", canonize, "Quotient colorings by GL first");
  ex_sampled->excludes(ex_canon);
  add_common(exhaust, c, true);

  auto* min_n = app.add_subcommand("min-n", "Least n for which every coloring has a witness");
  add_structure(min_n, s, false);
  min_n->add_option("--n", s.n_range, "Range HI or LO:HI")->required();
  min_n->add_option("--m", s.m, "Witness dimension")->required();
  min_n->add_option("--r", s.r, "Number of colors")->check(CLI::PositiveNumber);
  min_n->add_option("--budget", c.budget, "Sampled colorings per n");
  min_n->add_flag("--sampled", sampled, "Sample colorings even for r = 2");
  add_common(min_n, c, true);

  auto* met = app.add_subcommand("metric", "Distances between norms and subspaces");
  met->add_option("name", metric.name, "omega | bm | alpha | gap | opnorm")
      ->required()
      ->check(CLI::IsMember({"omega", "bm", "alpha", "gap", "opnorm"}));
  met->add_option("--m", metric.m, "Norm shorthand (l1:2, linf:3, l2.5:2) or @file.json");
  met->add_option("--n", metric.n, "Second norm");
  met->add_option("--x", metric.x, "Reference norm for alpha");
  met->add_option("--input", c.input, "JSON input for gap ({ambient, u, w}) and opnorm ({matrix, domain, codomain})");
  met->add_option("--budget", c.budget, "Random starts (bm) or samples (sampled fallbacks)");
  met->add_option("--tol", c.tol, "Rank tolerance for reporting the inverse norm");
  add_common(met, c, true);

  auto* verify = app.add_subcommand("verify", "Run property suites and print a JSON report");
  auto* v_suites = verify->add_option("suites", suites, "Suite names");
  auto* v_all = verify->add_flag("--all", all, "Run every suite");
  v_all->excludes(v_suites);
  verify->add_option("--budget", c.budget, "Trial count for every randomized check");
  add_common(verify, c, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*rcef) return cmd_rcef(c, out);
    if (*tau2) return cmd_tau2(c, out);
    if (*enumerate) return cmd_enumerate(c, s, out);
    if (*witness) return cmd_witness(c, s, out);
    if (*exhaust) return cmd_exhaust(c, s, sampled, canonize, out);
    if (*min_n) return cmd_min_n(c, s, sampled, out);
    if (*met) return cmd_metric(c, metric, out);
    return cmd_verify(c, suites, all, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace ramsey::cli

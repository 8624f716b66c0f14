#include <algorithm>

#include "doctest.h"
#include "ramsey/verify_suite.hpp"

using namespace ramsey;
using namespace ramsey::verify;

TEST_CASE("empty configuration passes with no checks") {
  const SuiteReport r = run_suite({});
  CHECK(r.checks.empty());
  CHECK(r.pass());
  CHECK(r.certified_pass());
}

TEST_CASE("unknown suites and checks are rejected up front") {
  SuiteConfig c;
  c.suites = {"ramsey_desk", "nope"};
  CHECK_THROWS_AS(run_suite(c), Error);
  try {
    run_suite(c);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownSuite);
  }
  c.suites = {"ramsey_desk"};
  c.only = {"metrics.omega_triangle"};
  CHECK_THROWS_AS(run_suite(c), Error);
}

TEST_CASE("ramsey_desk includes the Fano checks") {
  SuiteConfig c;
  c.suites = {"ramsey_desk"};
  const SuiteReport r = run_suite(c);
  CHECK(r.pass());
  auto find = [&](const std::string& name) {
    return std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& x) { return x.name == name; });
  };
  REQUIRE(find("engine.fano_all_pass") != r.checks.end());
  REQUIRE(find("engine.n2_counterexample") != r.checks.end());
  CHECK(find("engine.fano_all_pass")->failures == 0);
  CHECK(std::is_sorted(r.checks.begin(), r.checks.end(),
                       [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; }));
}

TEST_CASE("appendix_constructions covers the amalgam, witness and lift checks") {
  SuiteConfig c;
  c.suites = {"appendix_constructions"};
  c.trials = 5;
  const SuiteReport r = run_suite(c);
  CHECK(r.certified_pass());
  std::vector<std::string> names;
  for (const auto& x : r.checks) {
    names.push_back(x.name);
    CHECK(x.anchor.rfind("normed_metrics.", 0) == 0);
  }
  for (const char* n : {"appendix.amalgam_embeddings", "appendix.amalgam_gap", "appendix.extrinsic_witness_agreement",
                        "appendix.dual_min_lift_two_route"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
}

TEST_CASE("reports are identical across runs and worker counts") {
  SuiteConfig c;
  c.suites = suite_names();
  c.trials = 4;
  c.seed = 99;
  const auto a = to_json(run_suite(c), false).dump();
  c.jobs = 4;
  const auto b = to_json(run_suite(c), false).dump();
  CHECK(a == b);
  c.seed = 100;
  CHECK(to_json(run_suite(c), false).dump() != a);
}

TEST_CASE("trial overrides") {
  SuiteConfig c;
  c.suites = {"gf_invariants"};
  c.only = {"gf.echelon_random", "gf.f5_example"};
  c.check_trials = {{"gf.echelon_random", 17}};
  c.trials = 3;
  const SuiteReport r = run_suite(c);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].name == "gf.echelon_random");
  CHECK(r.checks[0].trials == 17);
  CHECK(r.checks[1].trials == 6);
}

#pragma once

// Named, seeded suites of property checks over every module.
//
// A check is "certified" when its verdict rests on exact certificates and
// "consistency" when it rests on optimizer-derived bounds. Every check
// derives its random stream from the suite seed and its own name, so results
// do not depend on the number of workers.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/json_io.hpp"

namespace ramsey::verify {

enum class CheckKind { certified, consistency };

struct SuiteConfig {
  std::vector<std::string> suites;
  std::uint64_t seed = 1;
  /// Replaces the default trial count of every randomized check.
  std::optional<std::uint64_t> trials;
  /// Per-check overrides, keyed by check name; take precedence over `trials`.
  std::map<std::string, std::uint64_t> check_trials;
  /// Restricts the run to these check names when nonempty.
  std::vector<std::string> only;
  unsigned jobs = 1;
};

struct CheckResult {
  std::string name;
  std::string anchor;  // module.operation the check exercises
  CheckKind kind = CheckKind::certified;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  /// Smallest slack observed (bound minus observed deviation); negative on failure.
  double worst_margin = 0;
  double millis = 0;
};

struct SuiteReport {
  std::vector<CheckResult> checks;  // sorted by name

  bool pass() const;
  bool certified_pass() const;
};

const std::vector<std::string>& suite_names();
/// Check names of one suite. Throws Errc::UnknownSuite.
std::vector<std::string> check_names(const std::string& suite);

/// Throws Errc::UnknownSuite for an unknown suite or check name before any
/// check runs.
SuiteReport run_suite(const SuiteConfig& config);

io::json to_json(const SuiteReport& r, bool timing = true);

}  // namespace ramsey::verify

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ramsey::cli {

/// Exit statuses.
inline constexpr int kSuccess = 0;
inline constexpr int kRefuted = 1;  // counterexample, no witness, or a certified check failed
inline constexpr int kUsage = 2;

/// args excludes the program name. Results go to `out` unless --output is
/// given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ramsey::cli

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ramsey {

enum class Errc {
  NotPrime,
  DimensionMismatch,
  RankDeficient,
  ZeroMatrix,
  NotInvertible,
  NotRref,
  Overflow,
  Parse,
  BadArity,
  NotBooleanPartition,
  TooSmallDomain,
  UniverseTooLarge,
  KindMismatch,
  NotInjective,
  AmbientMismatch,
  Infeasible,
  DualNotComputable,
  NotIntoEllInfty,
  BudgetExhausted,
  RankMismatch,
  LipschitzViolation,
  UnknownSuite,
  Unsupported,
};

std::string_view errc_name(Errc code);

/// Single exception type for the library; the code identifies the failing
/// precondition so callers (and the CLI) can map it to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ramsey

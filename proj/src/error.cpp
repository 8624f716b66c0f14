#include "ramsey/error.hpp"

namespace ramsey {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::NotRref: return "NotRref";
    case Errc::Overflow: return "Overflow";
    case Errc::Parse: return "Parse";
    case Errc::BadArity: return "BadArity";
    case Errc::NotBooleanPartition: return "NotBooleanPartition";
    case Errc::TooSmallDomain: return "TooSmallDomain";
    case Errc::UniverseTooLarge: return "UniverseTooLarge";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::NotInjective: return "NotInjective";
    case Errc::AmbientMismatch: return "AmbientMismatch";
    case Errc::Infeasible: return "Infeasible";
    case Errc::DualNotComputable: return "DualNotComputable";
    case Errc::NotIntoEllInfty: return "NotIntoEllInfty";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::RankMismatch: return "RankMismatch";
    case Errc::LipschitzViolation: return "LipschitzViolation";
    case Errc::UnknownSuite: return "UnknownSuite";
    case Errc::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace ramsey

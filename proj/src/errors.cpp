#include "ahres/errors.hpp"

namespace ahres {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveBoundaryMetric: return "NonPositiveBoundaryMetric";
    case ErrorCode::NonSimpleInteriorZero: return "NonSimpleInteriorZero";
    case ErrorCode::InteriorSignChange: return "InteriorSignChange";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::WarpZeroInDomain: return "WarpZeroInDomain";
    case ErrorCode::NonPolynomialCoefficient: return "NonPolynomialCoefficient";
    case ErrorCode::DegenerateTopCoefficient: return "DegenerateTopCoefficient";
    case ErrorCode::BranchPointInput: return "BranchPointInput";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::SingularLeadingCoefficient: return "SingularLeadingCoefficient";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NearResonance: return "NearResonance";
    case ErrorCode::UnsupportedWhich: return "UnsupportedWhich";
    case ErrorCode::PoleOfVarpi: return "PoleOfVarpi";
    case ErrorCode::SingularInnerBlock: return "SingularInnerBlock";
    case ErrorCode::WindowTooDeep: return "WindowTooDeep";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace ahres

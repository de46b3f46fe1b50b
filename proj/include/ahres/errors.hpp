#pragma once

#include <stdexcept>
#include <string>

namespace ahres {

enum class ErrorCode {
  NonPositiveBoundaryMetric,
  NonSimpleInteriorZero,
  InteriorSignChange,
  UnsupportedDimension,
  DegreeOutOfRange,
  WarpZeroInDomain,
  NonPolynomialCoefficient,
  DegenerateTopCoefficient,
  BranchPointInput,
  BadInterval,
  DomainMismatch,
  SingularLeadingCoefficient,
  NoConvergence,
  NearResonance,
  UnsupportedWhich,
  PoleOfVarpi,
  SingularInnerBlock,
  WindowTooDeep,
  IllConditioned,
  ConfigError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ahres

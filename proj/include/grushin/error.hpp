#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

enum class ErrorKind {
  MixedDegree,
  ZeroPolynomial,
  DependentInput,
  DegenerateParameter,
  ParameterOutOfRange,
  DomainError,
  NonIntegrableWeight,
  NotSymmetric,
  OriginUndefined,
  InadmissibleIndex,
  InvalidShell,
  CriticalLine,
  DegenerateData,
  UncoveredCase,
  PoleHit,
  NonSmoothTestFunction,
  ParseError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace grushin

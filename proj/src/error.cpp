#include "grushin/config.hpp"
#include "grushin/error.hpp"

namespace grushin {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MixedDegree: return "MixedDegree";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::DependentInput: return "DependentInput";
    case ErrorKind::DegenerateParameter: return "DegenerateParameter";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonIntegrableWeight: return "NonIntegrableWeight";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::OriginUndefined: return "OriginUndefined";
    case ErrorKind::InadmissibleIndex: return "InadmissibleIndex";
    case ErrorKind::InvalidShell: return "InvalidShell";
    case ErrorKind::CriticalLine: return "CriticalLine";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::UncoveredCase: return "UncoveredCase";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::NonSmoothTestFunction: return "NonSmoothTestFunction";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string GrushinConfig::str() const {
  return "(" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(alpha) + ")";
}

void require_harmonic_config(const GrushinConfig& cfg) {
  if (cfg.n < 2 || cfg.m < 1 || cfg.alpha < 0)
    fail(ErrorKind::ParameterOutOfRange, "need n >= 2, m >= 1, alpha >= 0, got " + cfg.str());
  if (cfg.n + cfg.m > 16) fail(ErrorKind::ParameterOutOfRange, "at most 16 variables supported");
}

}  // namespace grushin

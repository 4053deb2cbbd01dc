#pragma once

#include <stdexcept>
#include <string>

namespace rpcoh {

/// Broad failure class; the CLI maps each to an exit code.
enum class ErrorKind {
  Config,     // bad input, configuration or contract violation
  Numerical,  // the numerics broke an invariant they should keep
  Oracle,     // a self-check disagreed with its reference
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define RPCOH_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

RPCOH_DEFINE_ERROR(ConfigError, Config)
RPCOH_DEFINE_ERROR(InvalidSpinError, Config)
RPCOH_DEFINE_ERROR(ContractViolation, Config)
RPCOH_DEFINE_ERROR(InvalidStateError, Config)
RPCOH_DEFINE_ERROR(ModeError, Config)
RPCOH_DEFINE_ERROR(NormalizationError, Config)
RPCOH_DEFINE_ERROR(DegenerateStateError, Config)
RPCOH_DEFINE_ERROR(KrausCompletenessError, Config)
RPCOH_DEFINE_ERROR(UndefinedMeasureError, Config)
RPCOH_DEFINE_ERROR(RegimeError, Config)
RPCOH_DEFINE_ERROR(ParseError, Config)
RPCOH_DEFINE_ERROR(NumericalFailure, Numerical)
RPCOH_DEFINE_ERROR(OracleFailure, Oracle)

#undef RPCOH_DEFINE_ERROR

}  // namespace rpcoh

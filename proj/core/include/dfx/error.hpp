#pragma once

#include <stdexcept>
#include <string>

namespace dfx {

enum class ErrorKind {
  UnsupportedForm,
  SingularEvaluation,
  Inconclusive,
  DomainError,
  DegenerateJet,
  OffShellMode,
  BudgetExceeded,
  ConstructionFailed,
  DegenerateMetric,
  ConstraintViolated,
  NewtonDiverged,
  JacobianSingular,
  QuadratureInconsistent,
  DegenerateSeed,
  ConfigError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace dfx

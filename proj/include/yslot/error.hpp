#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace yslot {

enum class ErrorKind {
  NotATree,
  GatewayCountNot3,
  NoDegree3Node,
  LossOutOfRange,
  LinkNotInProximity,
  InvalidConfig,
  DomainError,
  ConvergenceError,
  InfeasibleBudget,
  UnknownModel,
  DoesNotFit,
  CausalityViolation,
  ConflictViolation,
  InvalidTimeline,
  NodeSetMismatch,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace yslot

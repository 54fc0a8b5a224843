#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catmeas {

enum class ErrorCode {
  InvalidModel,
  EmptyElement,
  DegenerateQuotient,
  FlavorMismatch,
  ShapeMismatch,
  NotAFunctor,
  AlgebraMismatch,
  NotIdempotent,
  UnknownPoint,
  BaseMismatch,
  NotACosheaf,
  SupportError,
  SyntaxError,
  UnresolvedReference,
  NonPositiveWeight,
  UnknownCommand,
  CommandMismatch,
};

std::string_view to_string(ErrorCode code);

/// Every library failure is reported through this exception; `code()` is the
/// machine-readable discriminator.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace catmeas

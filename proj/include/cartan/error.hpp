#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cartan {

enum class ErrorKind {
  InvalidInput,
  ParseError,
  NotSquarefree,
  NotTotallyReal,
  NotMonic,
  DegreeTooLarge,
  EmptyResult,
  RankDeficient,
  InconsistentDeterminants,
  NonIntegerEntry,
  DeterminantNotUnit,
  NotCommuting,
  ReducibleCharPoly,
  NotUnimodular,
  ZeroEigenvalue,
  DegenerateArrangement,
  SpanDeficient,
  Unbounded,
  DimensionTooLarge,
  DegenerateFacet,
  CaseO,
  RatioOutOfRange,
  NotANorm,
  BoundViolation,
  IdentityViolation,
  NonPositiveArgument,
  QuadratureNotConverged,
  NumericalFailure,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Failures that indicate bad user input rather than a broken cross-check.
bool is_input_error(ErrorKind kind);

}  // namespace cartan

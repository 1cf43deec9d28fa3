#include "cartan/error.hpp"

namespace cartan {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::NotTotallyReal: return "NotTotallyReal";
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::InconsistentDeterminants: return "InconsistentDeterminants";
    case ErrorKind::NonIntegerEntry: return "NonIntegerEntry";
    case ErrorKind::DeterminantNotUnit: return "DeterminantNotUnit";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::ReducibleCharPoly: return "ReducibleCharPoly";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorKind::DegenerateArrangement: return "DegenerateArrangement";
    case ErrorKind::SpanDeficient: return "SpanDeficient";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::DegenerateFacet: return "DegenerateFacet";
    case ErrorKind::CaseO: return "CaseO";
    case ErrorKind::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorKind::NotANorm: return "NotANorm";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::ParseError:
    case ErrorKind::NotSquarefree:
    case ErrorKind::NotTotallyReal:
    case ErrorKind::NotMonic:
    case ErrorKind::DegreeTooLarge:
    case ErrorKind::NotCommuting:
    case ErrorKind::ReducibleCharPoly:
    case ErrorKind::NotUnimodular:
    case ErrorKind::DegenerateArrangement:
    case ErrorKind::SpanDeficient:
    case ErrorKind::DimensionTooLarge:
    case ErrorKind::RatioOutOfRange:
    case ErrorKind::NotANorm:
    case ErrorKind::NonPositiveArgument:
    case ErrorKind::CaseO:
    case ErrorKind::EmptyResult:
    case ErrorKind::RankDeficient:
    case ErrorKind::DeterminantNotUnit:
    case ErrorKind::ZeroEigenvalue:
    case ErrorKind::NonIntegerEntry:
      return true;
    default:
      return false;
  }
}

}  // namespace cartan

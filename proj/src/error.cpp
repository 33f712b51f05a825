#include "ramforge/error.hpp"

namespace ramforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    case ErrorCode::RingMismatch: return "RING_MISMATCH";
    case ErrorCode::TruncationMismatch: return "TRUNCATION_MISMATCH";
    case ErrorCode::ZeroInput: return "ZERO_INPUT";
    case ErrorCode::InfiniteAtPrecision: return "INFINITE_AT_PRECISION";
    case ErrorCode::IdentityAtPrecision: return "IDENTITY_AT_PRECISION";
    case ErrorCode::InsufficientPrecision: return "INSUFFICIENT_PRECISION";
    case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::OraclePrecision: return "ORACLE_PRECISION";
    case ErrorCode::NotAUnit: return "NOT_A_UNIT";
    case ErrorCode::NotDivisible: return "NOT_DIVISIBLE";
    case ErrorCode::NotInvertible: return "NOT_INVERTIBLE";
    case ErrorCode::NotStable: return "NOT_STABLE";
    case ErrorCode::NotPPower: return "NOT_P_POWER";
    case ErrorCode::TooFewEntries: return "TOO_FEW_ENTRIES";
    case ErrorCode::HypothesisViolated: return "HYPOTHESIS_VIOLATED";
    case ErrorCode::NoMatchingM: return "NO_MATCHING_M";
    case ErrorCode::NoncommutingGenerators: return "NONCOMMUTING_GENERATORS";
    case ErrorCode::NoncommutingPair: return "NONCOMMUTING_PAIR";
    case ErrorCode::DegenerateWindow: return "DEGENERATE_WINDOW";
    case ErrorCode::NotInImage: return "NOT_IN_IMAGE";
    case ErrorCode::NotInB: return "NOT_IN_B";
    case ErrorCode::ReductionMismatch: return "REDUCTION_MISMATCH";
    case ErrorCode::ResidualNonzero: return "RESIDUAL_NONZERO";
    case ErrorCode::NeitherMatches: return "NEITHER_MATCHES";
    case ErrorCode::NotIntegral: return "NOT_INTEGRAL";
  }
  return "UNKNOWN";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::SchemaError:
    case ErrorCode::RingMismatch:
    case ErrorCode::TruncationMismatch:
    case ErrorCode::ZeroInput:
      return 2;
    case ErrorCode::InfiniteAtPrecision:
    case ErrorCode::IdentityAtPrecision:
    case ErrorCode::InsufficientPrecision:
    case ErrorCode::PrecisionExhausted:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::OraclePrecision:
      return 3;
    case ErrorCode::ResidualNonzero:
    case ErrorCode::NeitherMatches:
    case ErrorCode::NotIntegral:
      return 5;
    default:
      return 4;
  }
}

}  // namespace ramforge

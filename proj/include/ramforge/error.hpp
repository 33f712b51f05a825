#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ramforge {

enum class ErrorCode {
  // validation
  InvalidArgument,
  SchemaError,
  RingMismatch,
  TruncationMismatch,
  ZeroInput,
  // precision
  InfiniteAtPrecision,
  IdentityAtPrecision,
  InsufficientPrecision,
  PrecisionExhausted,
  BudgetExceeded,
  OraclePrecision,
  // mathematical hypotheses
  NotAUnit,
  NotDivisible,
  NotInvertible,
  NotStable,
  NotPPower,
  TooFewEntries,
  HypothesisViolated,
  NoMatchingM,
  NoncommutingGenerators,
  NoncommutingPair,
  DegenerateWindow,
  NotInImage,
  NotInB,
  ReductionMismatch,
  // internal consistency
  ResidualNonzero,
  NeitherMatches,
  NotIntegral,
};

std::string_view to_string(ErrorCode code);

/// Process exit code for an error class: 2 validation, 3 precision,
/// 4 hypothesis violation, 5 internal residual failure.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ramforge

#include "ieoe/error.h"

namespace ieoe {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kRewardOutOfRange: return "reward-out-of-range";
    case ErrorCode::kNonpositivePropensity: return "nonpositive-propensity";
    case ErrorCode::kActionOutOfRange: return "action-out-of-range";
    case ErrorCode::kInvalidDistribution: return "invalid-distribution";
    case ErrorCode::kMissingPropensities: return "missing-propensities";
    case ErrorCode::kZeroEstimatedPropensity: return "zero-estimated-propensity";
    case ErrorCode::kZeroWeightSum: return "zero-weight-sum";
    case ErrorCode::kUnknownEstimatorKind: return "unknown-estimator-kind";
    case ErrorCode::kNotAPartition: return "not-a-partition";
    case ErrorCode::kSingularSystem: return "singular-system";
    case ErrorCode::kEmptySubset: return "empty-subset";
    case ErrorCode::kTooManyFolds: return "too-many-folds";
    case ErrorCode::kEmptySpace: return "empty-space";
    case ErrorCode::kDeltaOutOfRange: return "delta-out-of-range";
    case ErrorCode::kTooFewSamples: return "too-few-samples";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kNonpositiveZmax: return "nonpositive-zmax";
    case ErrorCode::kAlphaOutOfRange: return "alpha-out-of-range";
    case ErrorCode::kFewerThanTwoDatasets: return "fewer-than-two-datasets";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kValidationError: return "validation-error";
    case ErrorCode::kSchemaViolation: return "schema-violation";
    case ErrorCode::kIoError: return "io-error";
    case ErrorCode::kEstimatorFailure: return "estimator-failure";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      index_(index) {}

}  // namespace ieoe

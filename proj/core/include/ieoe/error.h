#ifndef IEOE_ERROR_H_
#define IEOE_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ieoe {

enum class ErrorCode {
  kDimensionMismatch,
  kRewardOutOfRange,
  kNonpositivePropensity,
  kActionOutOfRange,
  kInvalidDistribution,
  kMissingPropensities,
  kZeroEstimatedPropensity,
  kZeroWeightSum,
  kUnknownEstimatorKind,
  kNotAPartition,
  kSingularSystem,
  kEmptySubset,
  kTooManyFolds,
  kEmptySpace,
  kDeltaOutOfRange,
  kTooFewSamples,
  kEmptyInput,
  kNonpositiveZmax,
  kAlphaOutOfRange,
  kFewerThanTwoDatasets,
  kInvalidArgument,
  kParseError,
  kValidationError,
  kSchemaViolation,
  kIoError,
  kEstimatorFailure,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported with this exception. `index()` carries
// the first offending row/element when the failure is attributable to one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> index() const { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace ieoe

#endif  // IEOE_ERROR_H_

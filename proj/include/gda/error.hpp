#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gda {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NotSymmetric,
    NotPositiveDefinite,
    IoError,
    MissingLabelColumn,
    NonNumericCell,
    EmptyDataset,
    SingleClassDataset,
    DegenerateSplit,
    InsufficientClassSamples,
    CovarianceNotPD,
    NotAnLdaModel,
    IdenticalMeans,
    MalformedDocument,
    InvariantViolation,
    LengthMismatch,
    EmptyInput,
    NoPositives,
    SingleClassInput,
    WrongCurveKind,
    TooFewSamples,
    UnknownColumn,
    TooManyCategories,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures are reported through this exception; `code()` lets
/// callers branch without parsing the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gda

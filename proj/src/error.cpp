#include "gda/error.hpp"

namespace gda {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::SingleClassDataset: return "SingleClassDataset";
        case ErrorCode::DegenerateSplit: return "DegenerateSplit";
        case ErrorCode::InsufficientClassSamples: return "InsufficientClassSamples";
        case ErrorCode::CovarianceNotPD: return "CovarianceNotPD";
        case ErrorCode::NotAnLdaModel: return "NotAnLdaModel";
        case ErrorCode::IdenticalMeans: return "IdenticalMeans";
        case ErrorCode::MalformedDocument: return "MalformedDocument";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NoPositives: return "NoPositives";
        case ErrorCode::SingleClassInput: return "SingleClassInput";
        case ErrorCode::WrongCurveKind: return "WrongCurveKind";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::TooManyCategories: return "TooManyCategories";
    }
    return "Unknown";
}

}  // namespace gda

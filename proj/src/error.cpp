#include "scalelab/error.hpp"

namespace scalelab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidTiming: return "InvalidTiming";
        case ErrorCode::InvalidThreadCount: return "InvalidThreadCount";
        case ErrorCode::UndefinedMetric: return "UndefinedMetric";
        case ErrorCode::MissingBaseline: return "MissingBaseline";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::IntegrityError: return "IntegrityError";
        case ErrorCode::DuplicateError: return "DuplicateError";
        case ErrorCode::ProtocolOrder: return "ProtocolOrder";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::RecordCorrupt: return "RecordCorrupt";
        case ErrorCode::ManifestError: return "ManifestError";
        case ErrorCode::RowError: return "RowError";
        case ErrorCode::DuplicateRow: return "DuplicateRow";
        case ErrorCode::ProbeFormat: return "ProbeFormat";
        case ErrorCode::MergeConflict: return "MergeConflict";
        case ErrorCode::ConflictError: return "ConflictError";
        case ErrorCode::EmptyComparison: return "EmptyComparison";
        case ErrorCode::ScaleError: return "ScaleError";
        case ErrorCode::EmptySelection: return "EmptySelection";
        case ErrorCode::Unauthorized: return "Unauthorized";
        case ErrorCode::Forbidden: return "Forbidden";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
        case ErrorCode::MethodNotAllowed: return "MethodNotAllowed";
    }
    return "ValidationError";
}

}  // namespace scalelab

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace scalelab {

enum class ErrorCode {
    EmptyInput,
    InvalidTiming,
    InvalidThreadCount,
    UndefinedMetric,
    MissingBaseline,
    NotFound,
    IntegrityError,
    DuplicateError,
    ProtocolOrder,
    ValidationError,
    RecordCorrupt,
    ManifestError,
    RowError,
    DuplicateRow,
    ProbeFormat,
    MergeConflict,
    ConflictError,
    EmptyComparison,
    ScaleError,
    EmptySelection,
    Unauthorized,
    Forbidden,
    IoError,
    PayloadTooLarge,
    MethodNotAllowed,
};

inline constexpr ErrorCode kLastErrorCode = ErrorCode::MethodNotAllowed;

std::string_view to_string(ErrorCode code);

/// Every failure inside the library is reported as an Error carrying a
/// machine-readable code and an optional structured detail object.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, nlohmann::json detail = nlohmann::json::object())
        : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const nlohmann::json& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    nlohmann::json detail_;
};

}  // namespace scalelab

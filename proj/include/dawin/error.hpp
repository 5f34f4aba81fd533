#pragma once

#include <stdexcept>
#include <string>

namespace dawin {

enum class ErrorCode {
    IncompatibleModels,
    Domain,
    InvalidArgument,
    Io,
    Format,
    LengthMismatch,
    HeaderInconsistency,
    EmptyDataset,
    InsufficientData,
    DegenerateDomain,
    UndefinedOracle,
    MissingLabels,
    Unfitted,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::IncompatibleModels: return "incompatible-models";
        case ErrorCode::Domain: return "domain-error";
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::Io: return "io-error";
        case ErrorCode::Format: return "format-error";
        case ErrorCode::LengthMismatch: return "length-mismatch";
        case ErrorCode::HeaderInconsistency: return "header-inconsistency";
        case ErrorCode::EmptyDataset: return "empty-dataset";
        case ErrorCode::InsufficientData: return "insufficient-data";
        case ErrorCode::DegenerateDomain: return "degenerate-domain";
        case ErrorCode::UndefinedOracle: return "undefined-oracle";
        case ErrorCode::MissingLabels: return "missing-labels";
        case ErrorCode::Unfitted: return "unfitted-model";
    }
    return "error";
}

}  // namespace dawin

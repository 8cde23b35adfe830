#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sls {

// Stable machine-readable error codes. The CLI maps these 1:1 into the
// "error.code" field of its JSON error output, so renaming one is a
// breaking change for downstream tooling.
enum class ErrorCode {
    ConfigParse,
    ConfigInvalid,
    DimensionMismatch,
    PatternViolation,
    NotStabilizable,
    EmptySupport,
    LocalizabilityFailed,
    DareFailed,
    UnstableColumn,
    KktInfeasible,
    KktSingular,
    FirInfeasible,
    IoError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigParse: return "config_parse";
        case ErrorCode::ConfigInvalid: return "config_invalid";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::PatternViolation: return "pattern_violation";
        case ErrorCode::NotStabilizable: return "not_stabilizable";
        case ErrorCode::EmptySupport: return "empty_support";
        case ErrorCode::LocalizabilityFailed: return "localizability_failed";
        case ErrorCode::DareFailed: return "dare_failed";
        case ErrorCode::UnstableColumn: return "unstable_column";
        case ErrorCode::KktInfeasible: return "kkt_infeasible";
        case ErrorCode::KktSingular: return "kkt_singular";
        case ErrorCode::FirInfeasible: return "fir_infeasible";
        case ErrorCode::IoError: return "io_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    // Per-column failures carry the offending global column indices so
    // callers can report exactly which subproblems broke.
    Error(ErrorCode code, const std::string& message, std::vector<long> columns)
        : std::runtime_error(message), code_(code), columns_(std::move(columns)) {}

    ErrorCode code() const noexcept { return code_; }
    const char* code_name() const noexcept { return to_string(code_); }
    const std::vector<long>& columns() const noexcept { return columns_; }

private:
    ErrorCode code_;
    std::vector<long> columns_;
};

}  // namespace sls

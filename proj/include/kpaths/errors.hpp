#pragma once

#include <stdexcept>
#include <string>

namespace kpaths {

enum class ErrorCode {
    IdOutOfRange,
    ParseError,
    DuplicateEntity,
    DuplicateRelation,
    UnresolvedEntity,
    AlreadyAugmented,
    ExportError,
    IoError,
};

// Library-wide exception type. Callers that care about the failure class
// switch on code(); the message carries file/line context where available.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IdOutOfRange: return "IdOutOfRange";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::DuplicateEntity: return "DuplicateEntity";
        case ErrorCode::DuplicateRelation: return "DuplicateRelation";
        case ErrorCode::UnresolvedEntity: return "UnresolvedEntity";
        case ErrorCode::AlreadyAugmented: return "AlreadyAugmented";
        case ErrorCode::ExportError: return "ExportError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace kpaths

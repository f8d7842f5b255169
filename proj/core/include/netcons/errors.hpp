#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netcons {

enum class ErrorCode {
    InvalidArgument,
    SelfLoop,
    NonpositiveWeight,
    DuplicateEdge,
    IndexOutOfRange,
    Disconnected,
    RootSolverFailure,
    NonFiniteValue,
    ZeroDCGain,
    NotAnEdge,
    DimensionMismatch,
    StepNotLogged,
    IncompleteLog,
    BracketFailure,
    ValidationError,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type used throughout the library. The code identifies the
/// failure class; the message carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace netcons

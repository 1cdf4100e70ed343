#pragma once

#include <stdexcept>
#include <string>

namespace paritylock {

enum class ErrorKind {
    InvalidCutoff,
    DimensionMismatch,
    UndefinedConditional,
    CutoffViolation,
    NoTransition,
    InvalidPhases,
    InvalidArgument,
    NotParityLocked,
    UndefinedVisibility,
    AliasingError,
    UnresolvedFrequencies,
    InconsistentPopulations,
    ZeroProbability,
    ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace paritylock

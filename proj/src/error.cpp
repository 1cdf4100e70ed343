#include "paritylock/error.hpp"

namespace paritylock {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidCutoff: return "invalid-cutoff";
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::UndefinedConditional: return "undefined-conditional";
        case ErrorKind::CutoffViolation: return "cutoff-violation";
        case ErrorKind::NoTransition: return "no-transition";
        case ErrorKind::InvalidPhases: return "invalid-phases";
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::NotParityLocked: return "not-parity-locked";
        case ErrorKind::UndefinedVisibility: return "undefined-visibility";
        case ErrorKind::AliasingError: return "aliasing-error";
        case ErrorKind::UnresolvedFrequencies: return "unresolved-frequencies";
        case ErrorKind::InconsistentPopulations: return "inconsistent-populations";
        case ErrorKind::ZeroProbability: return "zero-probability";
        case ErrorKind::ParseError: return "parse-error";
    }
    return "unknown";
}

}  // namespace paritylock

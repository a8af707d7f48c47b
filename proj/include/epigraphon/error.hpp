#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epigraphon {

/// Failure categories raised by the library. Each one maps to a distinct
/// process exit code in the command-line front end.
enum class ErrorKind {
    DimensionMismatch,
    ZeroArrivals,
    InvalidMobility,
    InvalidGraph,
    BadPartition,
    NonFiniteInput,
    NegativeSusceptible,
    BlowUp,
    NonFiniteState,
    NoConvergence,
    ZeroMatrix,
    WeightOutOfRange,
    OutOfDomain,
    AsymmetricRequest,
    TooManyBlocks,
    IncompatiblePartitions,
    ReferenceTooCoarse,
    InvalidArgument,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorKind kind);

/// Exit code used by the CLI for a given error kind (always >= 10).
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace epigraphon

#include "epigraphon/error.hpp"

namespace epigraphon {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ZeroArrivals: return "ZeroArrivals";
        case ErrorKind::InvalidMobility: return "InvalidMobility";
        case ErrorKind::InvalidGraph: return "InvalidGraph";
        case ErrorKind::BadPartition: return "BadPartition";
        case ErrorKind::NonFiniteInput: return "NonFiniteInput";
        case ErrorKind::NegativeSusceptible: return "NegativeSusceptible";
        case ErrorKind::BlowUp: return "BlowUp";
        case ErrorKind::NonFiniteState: return "NonFiniteState";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::ZeroMatrix: return "ZeroMatrix";
        case ErrorKind::WeightOutOfRange: return "WeightOutOfRange";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::AsymmetricRequest: return "AsymmetricRequest";
        case ErrorKind::TooManyBlocks: return "TooManyBlocks";
        case ErrorKind::IncompatiblePartitions: return "IncompatiblePartitions";
        case ErrorKind::ReferenceTooCoarse: return "ReferenceTooCoarse";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) { return 10 + static_cast<int>(kind); }

}  // namespace epigraphon

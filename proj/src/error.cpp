#include "netpart/error.hpp"

namespace netpart {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::PeriodOutOfRange: return "PeriodOutOfRange";
    case ErrorKind::DuplicatePeriod: return "DuplicatePeriod";
    case ErrorKind::AllMissing: return "AllMissing";
    case ErrorKind::ConstantSeries: return "ConstantSeries";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateRoad: return "DuplicateRoad";
    case ErrorKind::OverlappingClusters: return "OverlappingClusters";
    case ErrorKind::KTooSmall: return "KTooSmall";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::IsolatedRoad: return "IsolatedRoad";
    case ErrorKind::MissingSeries: return "MissingSeries";
    case ErrorKind::NoAdjacentPairs: return "NoAdjacentPairs";
    case ErrorKind::TooFewRoads: return "TooFewRoads";
    case ErrorKind::KMismatch: return "KMismatch";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
    case ErrorKind::UniverseMismatch: return "UniverseMismatch";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

}  // namespace netpart

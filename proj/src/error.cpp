#include "commshare/error.hpp"

namespace commshare {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::NegativeDemand: return "NegativeDemand";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::BoundaryGap: return "BoundaryGap";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::EmptyTable: return "EmptyTable";
    case ErrorKind::InvalidCounts: return "InvalidCounts";
    case ErrorKind::IncompleteTable: return "IncompleteTable";
    case ErrorKind::TooManyAgents: return "TooManyAgents";
    case ErrorKind::DegenerateNormalizer: return "DegenerateNormalizer";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::ZeroTruth: return "ZeroTruth";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::CalendarMismatch: return "CalendarMismatch";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::InfeasibleComposition: return "InfeasibleComposition";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace commshare

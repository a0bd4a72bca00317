#include "zmlt/error.hpp"

namespace zmlt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::NotDecreasing: return "NotDecreasing";
    case ErrorCode::BadPercentages: return "BadPercentages";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::MissingPosition: return "MissingPosition";
    case ErrorCode::DegenerateLayout: return "DegenerateLayout";
    case ErrorCode::BadForest: return "BadForest";
    case ErrorCode::EmptyLevel: return "EmptyLevel";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::EmptyLayout: return "EmptyLayout";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace zmlt

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zmlt {

enum class ErrorCode {
  DisconnectedGraph,
  NonPositiveWeight,
  SelfLoop,
  DuplicateEdge,
  DuplicateNodeId,
  UnknownNode,
  WrongLength,
  NotDecreasing,
  BadPercentages,
  InvalidLevel,
  NotATree,
  MissingPosition,
  DegenerateLayout,
  BadForest,
  EmptyLevel,
  Disconnected,
  EmptyLayout,
  BadConfig,
  ParseError,
  IoError,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. what() holds the human text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zmlt

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kcomm {

enum class ErrorKind {
  // model
  DuplicateLayer,
  NodeIdCollision,
  MalformedGraph,
  UnknownLayer,
  UnknownNode,
  EndpointNotInLayer,
  DuplicatePair,
  // community
  EmptyGraph,
  MissingNode,
  DuplicateNode,
  InvalidQuantile,
  // cbg / matching
  NoInterLayerEdges,
  UnknownCommunity,
  EmptyCbg,
  TooLarge,
  // spec
  SyntaxError,
  SubscriptMismatch,
  EmptySpec,
  NonSerialSpec,
  MissingInterLayerEdges,
  DisconnectedSpec,
  // engine
  InternalCaseError,
  UnknownKey,
  // io
  IoError,
  ParseError,
  InvariantViolation,
  ReferentialIntegrity,
  EmptyInput,
  Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kcomm

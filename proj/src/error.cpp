#include "kcomm/error.hpp"

namespace kcomm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateLayer: return "DuplicateLayer";
    case ErrorKind::NodeIdCollision: return "NodeIdCollision";
    case ErrorKind::MalformedGraph: return "MalformedGraph";
    case ErrorKind::UnknownLayer: return "UnknownLayer";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::EndpointNotInLayer: return "EndpointNotInLayer";
    case ErrorKind::DuplicatePair: return "DuplicatePair";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::MissingNode: return "MissingNode";
    case ErrorKind::DuplicateNode: return "DuplicateNode";
    case ErrorKind::InvalidQuantile: return "InvalidQuantile";
    case ErrorKind::NoInterLayerEdges: return "NoInterLayerEdges";
    case ErrorKind::UnknownCommunity: return "UnknownCommunity";
    case ErrorKind::EmptyCbg: return "EmptyCbg";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SubscriptMismatch: return "SubscriptMismatch";
    case ErrorKind::EmptySpec: return "EmptySpec";
    case ErrorKind::NonSerialSpec: return "NonSerialSpec";
    case ErrorKind::MissingInterLayerEdges: return "MissingInterLayerEdges";
    case ErrorKind::DisconnectedSpec: return "DisconnectedSpec";
    case ErrorKind::InternalCaseError: return "InternalCaseError";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::ReferentialIntegrity: return "ReferentialIntegrity";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace kcomm

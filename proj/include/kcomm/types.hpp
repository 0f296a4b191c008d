#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace kcomm {

/// Globally unique node identifier. Node sets of different layers are disjoint.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

inline std::ostream& operator<<(std::ostream& os, NodeId n) { return os << n.value; }

using LayerId = std::string;

/// (a, b) with a in the first layer of the pair and b in the second.
using NodePair = std::pair<NodeId, NodeId>;

/// Community `index` of `layer`. Index 0 is the null community and only
/// ever appears inside result tuples.
struct CommunityId {
  LayerId layer;
  std::uint32_t index = 0;

  friend auto operator<=>(const CommunityId&, const CommunityId&) = default;
};

}  // namespace kcomm

template <>
struct std::hash<kcomm::NodeId> {
  std::size_t operator()(kcomm::NodeId n) const noexcept { return std::hash<std::uint32_t>{}(n.value); }
};

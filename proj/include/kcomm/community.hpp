#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kcomm/layer_graph.hpp"

namespace kcomm {

/// Disjoint, total assignment of one layer's nodes to communities 1..K.
class Membership {
 public:
  Membership() = default;
  /// `community_of[i]` is the community of `nodes[i]`; `nodes` must be the
  /// sorted node list of the layer and indices must cover 1..K densely.
  Membership(LayerId layer, std::vector<NodeId> nodes, std::vector<std::uint32_t> community_of);

  const LayerId& layer() const noexcept { return layer_; }
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  std::size_t community_count() const noexcept { return count_; }

  std::uint32_t community_at(std::uint32_t local) const { return community_of_[local]; }
  /// Throws UnknownNode.
  std::uint32_t community_of(NodeId n) const;
  /// Sorted members of community `index` (1-based).
  std::vector<NodeId> members(std::uint32_t index) const;

  friend bool operator==(const Membership&, const Membership&) = default;

 private:
  LayerId layer_;
  std::vector<NodeId> nodes_;
  std::vector<std::uint32_t> community_of_;
  std::size_t count_ = 0;
};

struct CommunitySummary {
  CommunityId id;
  std::size_t node_count = 0;
  std::size_t internal_edge_count = 0;
  double density = 0.0;
  std::vector<NodeId> hubs;  // sorted
};

/// Membership plus summaries of one layer; `summaries[m - 1]` describes community m.
struct LayerCommunities {
  Membership membership;
  std::vector<CommunitySummary> summaries;

  const CommunitySummary& summary(std::uint32_t index) const { return summaries.at(index - 1); }
};

constexpr double kDefaultHubQuantile = 0.8;

/// Multi-level greedy modularity maximisation (Louvain). Deterministic for a
/// fixed seed; communities are numbered by descending size, ties broken by
/// the smallest member id. Throws EmptyGraph.
Membership detect_communities(const LayerGraph& g, std::uint64_t seed);

/// Builds a membership from (node, external community label) rows. Labels
/// forming exactly 1..K are kept; otherwise they are renumbered 1..K in order
/// of first appearance. Throws MissingNode,
/// DuplicateNode, UnknownNode.
Membership load_membership(const LayerGraph& g, std::span<const std::pair<NodeId, std::int64_t>> rows);

/// Per-community statistics. Hubs are the members whose layer degree is at
/// least the nearest-rank `hub_quantile` quantile of member degrees.
/// Throws InvalidQuantile unless 0 < hub_quantile <= 1.
std::vector<CommunitySummary> summarize(const LayerGraph& g, const Membership& m, double hub_quantile);

/// 2|e| / (|v|(|v|-1)), with a single node counting as a clique.
double community_density(std::size_t node_count, std::size_t internal_edges);

/// Newman modularity of an unweighted partition.
double modularity(const LayerGraph& g, const Membership& m);

inline LayerCommunities make_layer_communities(const LayerGraph& g, Membership m, double hub_quantile) {
  auto summaries = summarize(g, m, hub_quantile);
  return {std::move(m), std::move(summaries)};
}

}  // namespace kcomm

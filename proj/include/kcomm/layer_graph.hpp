#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kcomm/types.hpp"

namespace kcomm {

/// Simple undirected graph holding one layer of a multilayer network.
///
/// Nodes are kept sorted; algorithms address them by local index
/// (position in `nodes()`), which is what the CSR adjacency stores.
/// Construction rejects self-loops and dangling endpoints; duplicate
/// edges collapse (set semantics) and are counted.
class LayerGraph {
 public:
  LayerGraph() = default;
  LayerGraph(LayerId id, std::vector<NodeId> nodes, const std::vector<NodePair>& edges,
             std::map<NodeId, std::string> labels = {});

  const LayerId& id() const noexcept { return id_; }

  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t duplicate_edges_dropped() const noexcept { return duplicates_dropped_; }

  bool contains(NodeId n) const noexcept { return local_index(n).has_value(); }
  std::optional<std::uint32_t> local_index(NodeId n) const noexcept;
  /// Throws UnknownNode.
  std::uint32_t index_of(NodeId n) const;
  NodeId node_at(std::uint32_t local) const { return nodes_[local]; }

  /// Sorted neighbour set. Throws UnknownNode.
  std::vector<NodeId> neighbors(NodeId n) const;
  std::size_t degree(NodeId n) const;

  std::span<const std::uint32_t> adjacent(std::uint32_t local) const noexcept {
    return {adjacency_.data() + offsets_[local], adjacency_.data() + offsets_[local + 1]};
  }
  std::size_t degree_at(std::uint32_t local) const noexcept { return offsets_[local + 1] - offsets_[local]; }

  /// Edges as (u, v) with u < v, sorted.
  std::vector<NodePair> edges() const;

  const std::map<NodeId, std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const LayerGraph& a, const LayerGraph& b) {
    return a.id_ == b.id_ && a.nodes_ == b.nodes_ && a.offsets_ == b.offsets_ &&
           a.adjacency_ == b.adjacency_ && a.labels_ == b.labels_;
  }

 private:
  LayerId id_;
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> adjacency_;
  std::size_t edge_count_ = 0;
  std::size_t duplicates_dropped_ = 0;
  std::map<NodeId, std::string> labels_;
};

}  // namespace kcomm

#include "kcomm/layer_graph.hpp"

#include <algorithm>

#include "kcomm/error.hpp"

namespace kcomm {

LayerGraph::LayerGraph(LayerId id, std::vector<NodeId> nodes, const std::vector<NodePair>& edges,
                       std::map<NodeId, std::string> labels)
    : id_(std::move(id)), nodes_(std::move(nodes)), labels_(std::move(labels)) {
  if (id_.empty()) throw Error(ErrorKind::MalformedGraph, "layer id must be nonempty");
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

  std::vector<std::pair<std::uint32_t, std::uint32_t>> local;
  local.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a == b) {
      throw Error(ErrorKind::MalformedGraph,
                  "self-loop on node " + std::to_string(a.value) + " in layer " + id_);
    }
    auto ia = local_index(a);
    auto ib = local_index(b);
    if (!ia || !ib) {
      NodeId missing = ia ? b : a;
      throw Error(ErrorKind::MalformedGraph, "edge endpoint " + std::to_string(missing.value) +
                                                 " is not a node of layer " + id_);
    }
    local.emplace_back(std::min(*ia, *ib), std::max(*ia, *ib));
  }
  std::sort(local.begin(), local.end());
  auto last = std::unique(local.begin(), local.end());
  duplicates_dropped_ = static_cast<std::size_t>(local.end() - last);
  local.erase(last, local.end());
  edge_count_ = local.size();

  std::vector<std::size_t> degree(nodes_.size(), 0);
  for (const auto& [u, v] : local) {
    ++degree[u];
    ++degree[v];
  }
  offsets_.assign(nodes_.size() + 1, 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : local) {
    adjacency_[cursor[u]++] = v;
    adjacency_[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }

  for (const auto& [node, label] : labels_) {
    if (!contains(node)) {
      throw Error(ErrorKind::MalformedGraph, "label for unknown node " + std::to_string(node.value));
    }
  }
}

std::optional<std::uint32_t> LayerGraph::local_index(NodeId n) const noexcept {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end() || *it != n) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

std::uint32_t LayerGraph::index_of(NodeId n) const {
  auto idx = local_index(n);
  if (!idx) {
    throw Error(ErrorKind::UnknownNode, "node " + std::to_string(n.value) + " not in layer " + id_);
  }
  return *idx;
}

std::vector<NodeId> LayerGraph::neighbors(NodeId n) const {
  std::vector<NodeId> out;
  for (auto j : adjacent(index_of(n))) out.push_back(nodes_[j]);
  return out;
}

std::size_t LayerGraph::degree(NodeId n) const { return degree_at(index_of(n)); }

std::vector<NodePair> LayerGraph::edges() const {
  std::vector<NodePair> out;
  out.reserve(edge_count_);
  for (std::uint32_t u = 0; u < nodes_.size(); ++u) {
    for (auto v : adjacent(u)) {
      if (u < v) out.emplace_back(nodes_[u], nodes_[v]);
    }
  }
  return out;
}

}  // namespace kcomm

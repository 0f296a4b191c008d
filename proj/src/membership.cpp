#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kcomm/community.hpp"
#include "kcomm/error.hpp"

namespace kcomm {

Membership::Membership(LayerId layer, std::vector<NodeId> nodes, std::vector<std::uint32_t> community_of)
    : layer_(std::move(layer)), nodes_(std::move(nodes)), community_of_(std::move(community_of)) {
  if (nodes_.size() != community_of_.size()) {
    throw Error(ErrorKind::InvariantViolation, "membership must assign every node exactly once");
  }
  std::vector<bool> seen;
  for (auto c : community_of_) {
    if (c == 0) throw Error(ErrorKind::InvariantViolation, "community index 0 is reserved");
    if (c > seen.size()) seen.resize(c, false);
    seen[c - 1] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorKind::InvariantViolation, "community indices of layer " + layer_ + " are not dense");
  }
  count_ = seen.size();
}

std::uint32_t Membership::community_of(NodeId n) const {
  if (!nodes_.empty() && nodes_.back().value - nodes_.front().value + 1 == nodes_.size()) {
    if (n.value >= nodes_.front().value && n.value <= nodes_.back().value) {
      return community_of_[n.value - nodes_.front().value];
    }
  }
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end() || *it != n) {
    throw Error(ErrorKind::UnknownNode, "node " + std::to_string(n.value) + " not in membership of " + layer_);
  }
  return community_of_[static_cast<std::size_t>(it - nodes_.begin())];
}

std::vector<NodeId> Membership::members(std::uint32_t index) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (community_of_[i] == index) out.push_back(nodes_[i]);
  }
  return out;
}

Membership load_membership(const LayerGraph& g, std::span<const std::pair<NodeId, std::int64_t>> rows) {
  constexpr std::uint32_t kUnset = 0;
  std::vector<std::uint32_t> assignment(g.node_count(), kUnset);
  std::unordered_map<std::int64_t, std::uint32_t> renumber;
  for (const auto& [node, label] : rows) {
    auto local = g.local_index(node);
    if (!local) {
      throw Error(ErrorKind::UnknownNode, "node " + std::to_string(node.value) + " not in layer " + g.id());
    }
    if (assignment[*local] != kUnset) {
      throw Error(ErrorKind::DuplicateNode, "node " + std::to_string(node.value) + " listed twice");
    }
    auto [it, inserted] = renumber.emplace(label, static_cast<std::uint32_t>(renumber.size() + 1));
    assignment[*local] = it->second;
  }
  // labels that already are exactly 1..K keep their numbering
  bool dense = std::all_of(renumber.begin(), renumber.end(), [&](const auto& kv) {
    return kv.first >= 1 && kv.first <= static_cast<std::int64_t>(renumber.size());
  });
  if (dense) {
    std::vector<std::uint32_t> label_of(renumber.size() + 1);
    for (const auto& [label, index] : renumber) label_of[index] = static_cast<std::uint32_t>(label);
    for (auto& a : assignment) {
      if (a != kUnset) a = label_of[a];
    }
  }
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == kUnset) {
      throw Error(ErrorKind::MissingNode, "node " + std::to_string(g.node_at(static_cast<std::uint32_t>(i)).value) +
                                              " has no community");
    }
  }
  return Membership(g.id(), {g.nodes().begin(), g.nodes().end()}, std::move(assignment));
}

double community_density(std::size_t node_count, std::size_t internal_edges) {
  if (node_count <= 1) return 1.0;
  return 2.0 * static_cast<double>(internal_edges) /
         (static_cast<double>(node_count) * static_cast<double>(node_count - 1));
}

std::vector<CommunitySummary> summarize(const LayerGraph& g, const Membership& m, double hub_quantile) {
  if (!(hub_quantile > 0.0 && hub_quantile <= 1.0)) {
    throw Error(ErrorKind::InvalidQuantile, "hub quantile must lie in (0, 1]");
  }
  const auto k = m.community_count();
  std::vector<CommunitySummary> out(k);
  std::vector<std::vector<std::uint32_t>> members(k);
  for (std::uint32_t i = 0; i < g.node_count(); ++i) members[m.community_at(i) - 1].push_back(i);

  for (std::size_t c = 0; c < k; ++c) {
    auto& s = out[c];
    s.id = {g.id(), static_cast<std::uint32_t>(c + 1)};
    s.node_count = members[c].size();
  }
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    for (auto v : g.adjacent(u)) {
      if (u < v && m.community_at(u) == m.community_at(v)) ++out[m.community_at(u) - 1].internal_edge_count;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    auto& s = out[c];
    s.density = community_density(s.node_count, s.internal_edge_count);

    std::vector<std::size_t> degrees;
    degrees.reserve(members[c].size());
    for (auto u : members[c]) degrees.push_back(g.degree_at(u));
    std::sort(degrees.begin(), degrees.end());
    // nearest-rank: smallest value with at least q*n observations at or below it
    auto rank = static_cast<std::size_t>(std::ceil(hub_quantile * static_cast<double>(degrees.size()) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, degrees.size());
    const auto threshold = degrees[rank - 1];
    for (auto u : members[c]) {
      if (g.degree_at(u) >= threshold) s.hubs.push_back(g.node_at(u));
    }
  }
  return out;
}

double modularity(const LayerGraph& g, const Membership& m) {
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  if (two_m == 0.0) return 0.0;
  std::vector<double> inside(m.community_count(), 0.0);
  std::vector<double> total(m.community_count(), 0.0);
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    const auto cu = m.community_at(u) - 1;
    total[cu] += static_cast<double>(g.degree_at(u));
    for (auto v : g.adjacent(u)) {
      if (m.community_at(v) - 1 == cu) inside[cu] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inside.size(); ++c) {
    q += inside[c] / two_m - (total[c] / two_m) * (total[c] / two_m);
  }
  return q;
}

}  // namespace kcomm

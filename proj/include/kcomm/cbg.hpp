#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kcomm/community.hpp"
#include "kcomm/mln.hpp"

namespace kcomm {

enum class Metric : char { Edges = 'e', Density = 'd', Hubs = 'h' };

std::optional<Metric> parse_metric(std::string_view s);
inline char metric_char(Metric m) { return static_cast<char>(m); }

/// Exact value num/den of a weight; den == 0 when it does not fit in 64 bits.
struct WeightRatio {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  bool exact() const noexcept { return den != 0; }
  friend bool operator==(const WeightRatio&, const WeightRatio&) = default;
};

struct MetaNode {
  CommunitySummary summary;

  std::uint32_t index() const noexcept { return summary.id.index; }
};

/// x_{i,j}: every inter-layer link with one endpoint in each community.
struct ExpandedEdgeSet {
  CommunityId left_community;
  CommunityId right_community;
  std::vector<NodePair> pairs;  // sorted, (left node, right node)

  friend bool operator==(const ExpandedEdgeSet&, const ExpandedEdgeSet&) = default;
};

struct MetaEdge {
  std::uint32_t left = 0;   // community index in the left layer
  std::uint32_t right = 0;  // community index in the right layer
  ExpandedEdgeSet expanded;
  double raw_weight = 0.0;  // |pairs| for the edge metric, else the metric value
  double weight = 0.0;
  WeightRatio exact;
};

struct CommunityBipartiteGraph {
  LayerId left_layer;
  LayerId right_layer;
  Metric metric = Metric::Edges;
  std::vector<MetaNode> left_nodes;   // U_left, ascending index
  std::vector<MetaNode> right_nodes;  // U_right, ascending index
  std::vector<MetaEdge> edges;        // ascending (left, right)
  std::vector<MetaEdge> dropped;      // connected pairs whose metric evaluated to zero

  const MetaEdge* find(std::uint32_t left, std::uint32_t right) const;
};

/// Normalised edge-count weight |pairs| / max. Throws EmptyCbg when cbg_max is 0.
double weight_e(std::size_t pairs, std::size_t cbg_max);
/// density(left) * |pairs| / (|v_left| |v_right|) * density(right).
double weight_d(const CommunitySummary& left, const CommunitySummary& right, std::size_t pairs);
/// Participating-hub ratio on each side times the edge fraction.
double weight_h(const CommunitySummary& left, const CommunitySummary& right, std::span<const NodePair> pairs);

/// Number of left hubs with a link into `right` and right hubs with a link into `left`.
std::pair<std::size_t, std::size_t> participating_hubs(const CommunitySummary& left, const CommunitySummary& right,
                                                       std::span<const NodePair> pairs);

WeightRatio ratio_e(std::size_t pairs, std::size_t cbg_max);
WeightRatio ratio_d(const CommunitySummary& left, const CommunitySummary& right, std::size_t pairs);
WeightRatio ratio_h(const CommunitySummary& left, const CommunitySummary& right, std::span<const NodePair> pairs);

/// Builds CBG(U_left, U_right) over the inter-layer links of (left, right).
/// Throws NoInterLayerEdges, UnknownCommunity.
CommunityBipartiteGraph build_cbg(const MLN& mln, const LayerId& left, const LayerId& right,
                                  std::span<const std::uint32_t> u_left, std::span<const std::uint32_t> u_right,
                                  const LayerCommunities& left_communities,
                                  const LayerCommunities& right_communities, Metric metric);

}  // namespace kcomm

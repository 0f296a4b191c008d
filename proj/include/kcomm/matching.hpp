#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kcomm/cbg.hpp"

namespace kcomm {

/// One-to-one community pairing MP with its achieved total weight.
struct MatchedPairs {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // (left index, right index), ascending
  double total_weight = 0.0;

  bool contains(std::uint32_t left, std::uint32_t right) const;
};

/// Integer objective the solvers optimise, one entry per cbg.edges element.
/// Uses the exact weight ratios over a common denominator when that fits,
/// otherwise weight * 1e9 rounded half-to-even (at least 1).
std::vector<std::int64_t> integer_weights(const CommunityBipartiteGraph& cbg);

/// Maximum-total-weight one-to-one matching of the CBG, solved as a flow
/// network (source -> U_left -> U_right -> sink, unit node capacities) with
/// successive shortest augmenting paths. Among all weight-maximal matchings
/// the lexicographically smallest (left, right) sequence is returned.
MatchedPairs max_flow_match(const CommunityBipartiteGraph& cbg);

/// Exhaustive enumeration with the same objective and tie-break.
/// Throws TooLarge when |U_left| + |U_right| > 16.
MatchedPairs brute_force_match(const CommunityBipartiteGraph& cbg);

/// Maximum matching cardinality, computed by Edmonds-Karp on the unit-capacity network.
std::size_t max_cardinality(const CommunityBipartiteGraph& cbg);

}  // namespace kcomm

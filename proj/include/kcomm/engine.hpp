#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "kcomm/cbg.hpp"
#include "kcomm/community.hpp"
#include "kcomm/kspec.hpp"
#include "kcomm/matching.hpp"

namespace kcomm {

/// One element of a k-community. Community slots follow the spec's layer
/// visit order (0 = no community); x slots follow the composition steps
/// (nullopt = φ).
struct KTuple {
  std::vector<std::uint32_t> community_slots;
  std::vector<std::optional<ExpandedEdgeSet>> x_slots;

  bool total() const;
  friend bool operator==(const KTuple&, const KTuple&) = default;
};

struct StepDiagnostics {
  Composition step;
  Metric metric = Metric::Edges;
  std::vector<std::uint32_t> u_left;
  std::vector<std::uint32_t> u_right;
  std::size_t cbg_edges = 0;
  std::size_t cbg_dropped = 0;
  MatchedPairs matched;
  std::size_t consistent = 0;
  std::size_t no_match = 0;
  std::size_t inconsistent = 0;
  std::size_t converged = 0;  // tuples sharing a right community with an earlier tuple
  double seconds = 0.0;       // wall time; excluded from deterministic outputs
};

using SummaryTable = std::map<LayerId, std::vector<CommunitySummary>>;
using CommunityTable = std::map<LayerId, LayerCommunities>;

struct KCommunityResult {
  KSpec spec;
  std::vector<LayerId> layers;  // slot order
  std::vector<KTuple> tuples;   // ordered by the base-case matching
  std::vector<StepDiagnostics> steps;
  SummaryTable summaries;  // communities of every spec layer

  std::size_t k() const { return layers.size(); }
};

/// Runs the serial composition loop. The spec must already be validated.
KCommunityResult detect_k_community(const MLN& mln, const CommunityTable& communities, const KSpec& spec,
                                    Metric default_metric);

/// Candidate community sets for one step. `layers` are the layers processed
/// so far (empty before the base case).
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> select_u(const MLN& mln, const Composition& step,
                                                                           const std::vector<LayerId>& layers,
                                                                           const std::vector<KTuple>& tuples,
                                                                           const CommunityTable& communities);

/// (total, partial) split, each in result order.
std::pair<std::vector<KTuple>, std::vector<KTuple>> classify(const KCommunityResult& result);

enum class RankKey { MinSize, SumSize, MinDensity, SumRawPairs };

/// Throws UnknownKey.
RankKey parse_rank_key(std::string_view s);
std::string_view to_string(RankKey key);

/// Descending by key; ties by ascending community slot sequence.
std::vector<KTuple> rank(const KCommunityResult& result, RankKey key);

}  // namespace kcomm

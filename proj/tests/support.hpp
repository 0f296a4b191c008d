#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "kcomm/cbg.hpp"
#include "kcomm/engine.hpp"
#include "kcomm/kspec.hpp"
#include "kcomm/mln.hpp"

namespace kcomm::test {

using Rng = std::mt19937_64;

struct Instance {
  MLN mln;
  CommunityTable communities;
};

std::filesystem::path data_dir();
std::filesystem::path fixture_dir();
/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);
std::string read_text(const std::filesystem::path& path);

/// Running-example MLN with its bundled memberships.
Instance load_fixture(double hub_quantile = kDefaultHubQuantile);

/// Disjoint cliques of the given sizes, node ids from `first_id`; the
/// membership is the block structure.
std::pair<LayerGraph, Membership> clique_layer(const LayerId& id, std::uint32_t first_id,
                                               const std::vector<std::size_t>& sizes);

MetaNode meta_node(const LayerId& layer, std::uint32_t index);

/// CBG with up to `max_side` meta nodes per side and weights in [0.05, 1].
CommunityBipartiteGraph random_cbg(Rng& rng, int max_side);

/// Two clique layers "L" and "R" joined by random links. With `equal_sizes`
/// every community of a layer has the same size. With `covering` every
/// node of two linked communities takes part in their links.
Instance clique_instance(Rng& rng, bool equal_sizes, bool covering);

/// 3 to 5 random layers, random inter-layer links (connected layer graph),
/// communities from detection.
Instance random_instance(Rng& rng);

/// Random serial spec over the layers of `mln`; may include cycle steps.
KSpec random_spec(Rng& rng, const MLN& mln);

/// Planted-partition layers "P1", "P2", "P3" of `nodes` nodes each, about
/// 3 edges per node, with community-aligned inter-layer links.
MLN planted_mln(std::uint64_t seed, std::size_t nodes);

}  // namespace kcomm::test

#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "kcomm/community.hpp"
#include "kcomm/io.hpp"

namespace kcomm::test {

std::filesystem::path data_dir() { return KCOMM_DATA_DIR; }
std::filesystem::path fixture_dir() { return data_dir() / "fixture"; }

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("kcomm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Instance load_fixture(double hub_quantile) {
  Instance inst{load_mln_dir(fixture_dir()), {}};
  for (const auto& [id, g] : inst.mln.layers()) {
    auto m = load_membership_file(fixture_dir() / membership_file_name(id), g);
    inst.communities.emplace(id, make_layer_communities(g, std::move(m), hub_quantile));
  }
  return inst;
}

std::pair<LayerGraph, Membership> clique_layer(const LayerId& id, std::uint32_t first_id,
                                               const std::vector<std::size_t>& sizes) {
  std::vector<NodeId> nodes;
  std::vector<NodePair> edges;
  std::vector<std::uint32_t> community;
  std::uint32_t next = first_id;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    std::uint32_t start = next;
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      nodes.emplace_back(next);
      community.push_back(static_cast<std::uint32_t>(c + 1));
      for (std::uint32_t j = start; j < next; ++j) edges.emplace_back(NodeId(j), NodeId(next));
      ++next;
    }
  }
  auto nodes_copy = nodes;
  return {LayerGraph(id, std::move(nodes), edges), Membership(id, std::move(nodes_copy), std::move(community))};
}

MetaNode meta_node(const LayerId& layer, std::uint32_t index) {
  MetaNode n;
  n.summary.id = {layer, index};
  return n;
}

CommunityBipartiteGraph random_cbg(Rng& rng, int max_side) {
  std::uniform_int_distribution<int> side(1, max_side);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::bernoulli_distribution present(0.5);
  CommunityBipartiteGraph cbg;
  cbg.left_layer = "L";
  cbg.right_layer = "R";
  const int nl = side(rng), nr = side(rng);
  for (int i = 1; i <= nl; ++i) cbg.left_nodes.push_back(meta_node("L", static_cast<std::uint32_t>(i)));
  for (int i = 1; i <= nr; ++i) cbg.right_nodes.push_back(meta_node("R", static_cast<std::uint32_t>(i)));
  for (int l = 1; l <= nl; ++l) {
    for (int r = 1; r <= nr; ++r) {
      if (!present(rng)) continue;
      MetaEdge e;
      e.left = static_cast<std::uint32_t>(l);
      e.right = static_cast<std::uint32_t>(r);
      e.weight = e.raw_weight = weight(rng);
      cbg.edges.push_back(e);
    }
  }
  return cbg;
}

Instance clique_instance(Rng& rng, bool equal_sizes, bool covering) {
  std::uniform_int_distribution<int> count(2, 6), size(1, 5);
  auto sizes_for = [&] {
    std::vector<std::size_t> s(static_cast<std::size_t>(count(rng)));
    const auto fixed = static_cast<std::size_t>(size(rng));
    for (auto& x : s) x = equal_sizes ? fixed : static_cast<std::size_t>(size(rng));
    return s;
  };
  const auto left_sizes = sizes_for();
  const auto right_sizes = sizes_for();
  auto [lg, lm] = clique_layer("L", 1, left_sizes);
  auto [rg, rm] = clique_layer("R", 1000, right_sizes);

  auto members = [](const Membership& m, std::uint32_t c) { return m.members(c); };
  std::bernoulli_distribution linked(0.45), extra(0.3);
  std::set<NodePair> links;
  for (std::uint32_t a = 1; a <= left_sizes.size(); ++a) {
    for (std::uint32_t b = 1; b <= right_sizes.size(); ++b) {
      if (!linked(rng)) continue;
      const auto va = members(lm, a), vb = members(rm, b);
      if (covering) {
        const auto n = std::max(va.size(), vb.size());
        for (std::size_t t = 0; t < n; ++t) links.emplace(va[t % va.size()], vb[t % vb.size()]);
      } else {
        std::uniform_int_distribution<std::size_t> pick_a(0, va.size() - 1), pick_b(0, vb.size() - 1);
        links.emplace(va[pick_a(rng)], vb[pick_b(rng)]);
      }
      for (auto x : va) {
        for (auto y : vb) {
          if (extra(rng)) links.emplace(x, y);
        }
      }
    }
  }
  if (links.empty()) links.emplace(lm.members(1).front(), rm.members(1).front());

  Instance inst;
  inst.communities.emplace("L", make_layer_communities(lg, lm, kDefaultHubQuantile));
  inst.communities.emplace("R", make_layer_communities(rg, rm, kDefaultHubQuantile));
  inst.mln.add_layer(std::move(lg));
  inst.mln.add_layer(std::move(rg));
  inst.mln.add_interlayer({"L", "R", {links.begin(), links.end()}});
  return inst;
}

Instance random_instance(Rng& rng) {
  std::uniform_int_distribution<int> layer_count(3, 5), node_count(12, 40);
  const int k = layer_count(rng);
  Instance inst;
  std::vector<std::vector<NodeId>> layer_nodes;
  std::uint32_t next = 1;
  for (int i = 0; i < k; ++i) {
    const LayerId id = "G" + std::to_string(i + 1);
    const int n = node_count(rng);
    std::vector<NodeId> nodes;
    for (int j = 0; j < n; ++j) nodes.emplace_back(next++);
    // a few dense groups plus sparse noise
    std::uniform_int_distribution<int> groups(2, 5);
    const int g = groups(rng);
    std::vector<NodePair> edges;
    std::bernoulli_distribution intra(0.6), inter(0.04);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if ((a % g == b % g) ? intra(rng) : inter(rng)) edges.emplace_back(nodes[a], nodes[b]);
      }
    }
    LayerGraph lg(id, nodes, edges);
    inst.communities.emplace(id, make_layer_communities(lg, detect_communities(lg, rng()), kDefaultHubQuantile));
    inst.mln.add_layer(std::move(lg));
    layer_nodes.push_back(std::move(nodes));
  }

  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i < k; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    pairs.emplace(parent(rng), i);
  }
  std::bernoulli_distribution more(0.5);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (more(rng)) pairs.emplace(i, j);
    }
  }
  for (auto [i, j] : pairs) {
    std::set<NodePair> links;
    std::uniform_int_distribution<std::size_t> a(0, layer_nodes[i].size() - 1), b(0, layer_nodes[j].size() - 1);
    std::uniform_int_distribution<int> amount(1, 40);
    for (int t = amount(rng); t > 0; --t) links.emplace(layer_nodes[i][a(rng)], layer_nodes[j][b(rng)]);
    inst.mln.add_interlayer({"G" + std::to_string(i + 1), "G" + std::to_string(j + 1), {links.begin(), links.end()}});
  }
  return inst;
}

KSpec random_spec(Rng& rng, const MLN& mln) {
  std::vector<LayerId> layers;
  for (const auto& [id, g] : mln.layers()) layers.push_back(id);
  auto neighbours = [&](const LayerId& l) {
    std::vector<LayerId> out;
    for (const auto& other : layers) {
      if (other != l && mln.has_interlayer(l, other)) out.push_back(other);
    }
    return out;
  };
  std::uniform_int_distribution<std::size_t> start(0, layers.size() - 1);
  KSpec spec;
  spec.first_layer = layers[start(rng)];
  std::vector<LayerId> visited{spec.first_layer};
  LayerId last = spec.first_layer;
  std::bernoulli_distribution chain(0.7), revisit(0.25), stop(0.15);
  for (int guard = 0; guard < 12; ++guard) {
    std::vector<LayerId> lefts;
    if (chain(rng)) {
      lefts.push_back(last);
    } else {
      lefts = visited;
    }
    std::shuffle(lefts.begin(), lefts.end(), rng);
    bool added = false;
    for (const auto& left : lefts) {
      auto options = neighbours(left);
      std::vector<LayerId> fresh, seen;
      for (const auto& o : options) {
        (std::find(visited.begin(), visited.end(), o) == visited.end() ? fresh : seen).push_back(o);
      }
      const auto& pool = (!seen.empty() && (fresh.empty() || revisit(rng))) ? seen : fresh;
      if (pool.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const auto right = pool[pick(rng)];
      const bool is_revisit = std::find(visited.begin(), visited.end(), right) != visited.end();
      spec.steps.push_back({left, right, std::nullopt, is_revisit});
      if (!is_revisit) visited.push_back(right);
      last = right;
      added = true;
      break;
    }
    if (!added) break;
    if (visited.size() == layers.size() && stop(rng)) break;
  }
  return spec;
}

MLN planted_mln(std::uint64_t seed, std::size_t nodes) {
  Rng rng(seed);
  constexpr std::size_t kBlock = 50;
  const std::size_t blocks = nodes / kBlock;
  MLN mln;
  // community c of layer i maps to community (c * 7 + i) mod blocks of the next layer
  std::uniform_int_distribution<std::size_t> in_block(0, kBlock - 1), any_block(0, blocks - 1);
  std::bernoulli_distribution noise(0.1);
  for (int layer = 0; layer < 3; ++layer) {
    const std::uint32_t base = static_cast<std::uint32_t>(layer * nodes);
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < nodes; ++i) ids.emplace_back(base + static_cast<std::uint32_t>(i));
    std::vector<NodePair> edges;
    for (std::size_t i = 0; i < nodes; ++i) {
      const std::size_t block = i / kBlock;
      for (int t = 0; t < 3; ++t) {
        std::size_t other_block = noise(rng) ? any_block(rng) : block;
        std::size_t j = other_block * kBlock + in_block(rng);
        if (j != i) edges.emplace_back(ids[i], ids[j]);
      }
    }
    mln.add_layer(LayerGraph("P" + std::to_string(layer + 1), ids, edges));
  }
  for (int layer = 0; layer < 3; ++layer) {
    const int next_layer = (layer + 1) % 3;
    const std::uint32_t a = static_cast<std::uint32_t>(layer * nodes);
    const std::uint32_t b = static_cast<std::uint32_t>(next_layer * nodes);
    std::set<NodePair> links;
    for (std::size_t i = 0; i < nodes; ++i) {
      const std::size_t block = i / kBlock;
      std::size_t target = noise(rng) ? any_block(rng) : (block * 7 + static_cast<std::size_t>(layer)) % blocks;
      links.emplace(NodeId(a + static_cast<std::uint32_t>(i)),
                    NodeId(b + static_cast<std::uint32_t>(target * kBlock + in_block(rng))));
    }
    mln.add_interlayer({"P" + std::to_string(layer + 1), "P" + std::to_string(next_layer + 1),
                        {links.begin(), links.end()}});
  }
  return mln;
}

}  // namespace kcomm::test

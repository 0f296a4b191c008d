// Multi-level modularity optimisation on unweighted layers.
//
// Every quantity stays integral: at level 0 edge weights are 1, and
// aggregation only sums them, so gains are compared exactly as
// 2m * k_i,in(C) - tot(C) * k_i.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>

#include "kcomm/community.hpp"
#include "kcomm/error.hpp"

namespace kcomm {
namespace {

struct LevelGraph {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<std::int64_t> weights;
  std::vector<std::int64_t> self_loop;  // A_ii, already counting both directions
  std::vector<std::int64_t> strength;   // k_i including self_loop

  std::size_t size() const { return self_loop.size(); }
};

LevelGraph from_layer(const LayerGraph& g) {
  LevelGraph lg;
  const auto n = g.node_count();
  lg.offsets.assign(n + 1, 0);
  lg.self_loop.assign(n, 0);
  lg.strength.assign(n, 0);
  for (std::uint32_t u = 0; u < n; ++u) {
    auto adj = g.adjacent(u);
    lg.offsets[u + 1] = lg.offsets[u] + adj.size();
    lg.targets.insert(lg.targets.end(), adj.begin(), adj.end());
    lg.strength[u] = static_cast<std::int64_t>(adj.size());
  }
  lg.weights.assign(lg.targets.size(), 1);
  return lg;
}

void shuffle(std::vector<std::uint32_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// Local moving phase. Returns true if any node changed community.
bool move_nodes(const LevelGraph& lg, std::int64_t two_m, std::vector<std::uint32_t>& comm,
                std::mt19937_64& rng) {
  const auto n = lg.size();
  std::vector<std::int64_t> tot(lg.strength);
  std::vector<std::int64_t> link(n, 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  shuffle(order, rng);

  bool any_move = false;
  constexpr int kMaxPasses = 1000;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool moved = false;
    for (auto i : order) {
      const auto own = comm[i];
      const auto ki = lg.strength[i];
      touched.clear();
      for (auto e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
        auto c = comm[lg.targets[e]];
        if (link[c] == 0 && c != own) touched.push_back(c);
        link[c] += lg.weights[e];
      }
      tot[own] -= ki;

      auto gain = [&](std::uint32_t c) { return two_m * link[c] - tot[c] * ki; };
      auto best = own;
      auto best_gain = gain(own);
      for (auto c : touched) {
        auto g = gain(c);
        if (g > best_gain || (g == best_gain && best != own && c < best)) {
          best = c;
          best_gain = g;
        }
      }
      tot[best] += ki;
      if (best != own) {
        comm[i] = best;
        moved = true;
      }
      link[own] = 0;
      for (auto c : touched) link[c] = 0;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

// Renumbers communities 0..K-1 by first appearance over ascending node index.
std::uint32_t compact(std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> remap(comm.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (remap[c] == UINT32_MAX) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::uint32_t k) {
  std::vector<std::vector<std::uint32_t>> groups(k);
  for (std::uint32_t i = 0; i < lg.size(); ++i) groups[comm[i]].push_back(i);

  LevelGraph out;
  out.offsets.assign(k + 1, 0);
  out.self_loop.assign(k, 0);
  out.strength.assign(k, 0);
  std::vector<std::int64_t> acc(k, 0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t c = 0; c < k; ++c) {
    touched.clear();
    for (auto i : groups[c]) {
      out.self_loop[c] += lg.self_loop[i];
      out.strength[c] += lg.strength[i];
      for (auto e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
        auto d = comm[lg.targets[e]];
        if (d == c) {
          out.self_loop[c] += lg.weights[e];
          continue;
        }
        if (acc[d] == 0) touched.push_back(d);
        acc[d] += lg.weights[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto d : touched) {
      out.targets.push_back(d);
      out.weights.push_back(acc[d]);
      acc[d] = 0;
    }
    out.offsets[c + 1] = out.targets.size();
  }
  return out;
}

}  // namespace

Membership detect_communities(const LayerGraph& g, std::uint64_t seed) {
  const auto n = g.node_count();
  if (n == 0) throw Error(ErrorKind::EmptyGraph, "layer " + g.id() + " has no nodes");

  std::vector<std::uint32_t> node_comm(n);
  std::iota(node_comm.begin(), node_comm.end(), 0u);

  const auto two_m = static_cast<std::int64_t>(2 * g.edge_count());
  if (two_m > 0) {
    std::mt19937_64 rng(seed);
    LevelGraph lg = from_layer(g);
    while (true) {
      std::vector<std::uint32_t> comm(lg.size());
      std::iota(comm.begin(), comm.end(), 0u);
      if (!move_nodes(lg, two_m, comm, rng)) break;
      const auto k = compact(comm);
      for (auto& c : node_comm) c = comm[c];
      if (k == lg.size()) break;
      lg = aggregate(lg, comm, k);
    }
  }

  // final numbering: descending size, then smallest member (nodes are sorted)
  const auto k = compact(node_comm);
  std::vector<std::size_t> size(k, 0);
  std::vector<std::uint32_t> first(k, UINT32_MAX);
  for (std::uint32_t i = 0; i < n; ++i) {
    ++size[node_comm[i]];
    first[node_comm[i]] = std::min(first[node_comm[i]], i);
  }
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return size[a] != size[b] ? size[a] > size[b] : first[a] < first[b];
  });
  std::vector<std::uint32_t> rank(k);
  for (std::uint32_t r = 0; r < k; ++r) rank[order[r]] = r + 1;
  for (auto& c : node_comm) c = rank[c];
  return Membership(g.id(), {g.nodes().begin(), g.nodes().end()}, std::move(node_comm));
}

}  // namespace kcomm

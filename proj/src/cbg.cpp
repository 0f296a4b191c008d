#include "kcomm/cbg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kcomm/error.hpp"

namespace kcomm {
namespace {

__extension__ typedef unsigned __int128 u128;

u128 gcd128(u128 a, u128 b) {
  constexpr u128 narrow = std::numeric_limits<std::uint64_t>::max();
  if (a <= narrow && b <= narrow) return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  while (b != 0) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Fraction {
  u128 num;
  u128 den;
};

Fraction reduce(Fraction f) {
  if (f.num == 0) return {0, 1};
  auto g = gcd128(f.num, f.den);
  return {f.num / g, f.den / g};
}

std::optional<Fraction> multiply(Fraction a, Fraction b) {
  a = reduce(a);
  b = reduce(b);
  // cross-cancel before multiplying to stay inside 128 bits
  auto g1 = gcd128(a.num, b.den);
  auto g2 = gcd128(b.num, a.den);
  if (g1 == 0 || g2 == 0) return Fraction{0, 1};
  a.num /= g1;
  b.den /= g1;
  b.num /= g2;
  a.den /= g2;
  constexpr u128 limit = std::numeric_limits<std::uint64_t>::max();
  if (a.num > limit || b.num > limit || a.den > limit || b.den > limit) return std::nullopt;
  return reduce({a.num * b.num, a.den * b.den});
}

WeightRatio to_ratio(std::optional<Fraction> f) {
  constexpr u128 limit = std::numeric_limits<std::uint64_t>::max();
  if (!f) return {};
  auto r = reduce(*f);
  if (r.num > limit || r.den > limit) return {};
  return {static_cast<std::uint64_t>(r.num), static_cast<std::uint64_t>(r.den)};
}

Fraction density_fraction(const CommunitySummary& s) {
  if (s.node_count <= 1) return {1, 1};
  return {2 * static_cast<u128>(s.internal_edge_count),
          static_cast<u128>(s.node_count) * static_cast<u128>(s.node_count - 1)};
}

Fraction edge_fraction(const CommunitySummary& l, const CommunitySummary& r, std::size_t pairs) {
  return {pairs, static_cast<u128>(l.node_count) * static_cast<u128>(r.node_count)};
}

double edge_fraction_value(const CommunitySummary& l, const CommunitySummary& r, std::size_t pairs) {
  return static_cast<double>(pairs) / (static_cast<double>(l.node_count) * static_cast<double>(r.node_count));
}

double hub_weight(const CommunitySummary& left, const CommunitySummary& right, std::size_t pairs, std::size_t hl,
                  std::size_t hr) {
  if (left.hubs.empty() || right.hubs.empty()) return 0.0;
  return (static_cast<double>(hl) / static_cast<double>(left.hubs.size())) * edge_fraction_value(left, right, pairs) *
         (static_cast<double>(hr) / static_cast<double>(right.hubs.size()));
}

WeightRatio hub_ratio(const CommunitySummary& left, const CommunitySummary& right, std::size_t pairs, std::size_t hl,
                      std::size_t hr) {
  if (left.hubs.empty() || right.hubs.empty()) return {0, 1};
  auto f = multiply(Fraction{hl, left.hubs.size()}, edge_fraction(left, right, pairs));
  if (!f) return {};
  return to_ratio(multiply(*f, Fraction{hr, right.hubs.size()}));
}

}  // namespace

std::optional<Metric> parse_metric(std::string_view s) {
  if (s == "e") return Metric::Edges;
  if (s == "d") return Metric::Density;
  if (s == "h") return Metric::Hubs;
  return std::nullopt;
}

const MetaEdge* CommunityBipartiteGraph::find(std::uint32_t l, std::uint32_t r) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{l, r},
                             [](const MetaEdge& e, std::pair<std::uint32_t, std::uint32_t> k) {
                               return std::pair{e.left, e.right} < k;
                             });
  if (it == edges.end() || it->left != l || it->right != r) return nullptr;
  return &*it;
}

double weight_e(std::size_t pairs, std::size_t cbg_max) {
  if (cbg_max == 0) throw Error(ErrorKind::EmptyCbg, "no meta edges to normalise");
  return static_cast<double>(pairs) / static_cast<double>(cbg_max);
}

double weight_d(const CommunitySummary& left, const CommunitySummary& right, std::size_t pairs) {
  return left.density * edge_fraction_value(left, right, pairs) * right.density;
}

std::pair<std::size_t, std::size_t> participating_hubs(const CommunitySummary& left, const CommunitySummary& right,
                                                       std::span<const NodePair> pairs) {
  std::vector<char> seen_left(left.hubs.size(), 0), seen_right(right.hubs.size(), 0);
  std::size_t hl = 0, hr = 0;
  auto mark = [](const std::vector<NodeId>& hubs, std::vector<char>& seen, NodeId n, std::size_t& count) {
    auto it = std::lower_bound(hubs.begin(), hubs.end(), n);
    if (it == hubs.end() || *it != n) return;
    auto& s = seen[static_cast<std::size_t>(it - hubs.begin())];
    if (!s) {
      s = 1;
      ++count;
    }
  };
  for (const auto& [a, b] : pairs) {
    mark(left.hubs, seen_left, a, hl);
    mark(right.hubs, seen_right, b, hr);
  }
  return {hl, hr};
}

double weight_h(const CommunitySummary& left, const CommunitySummary& right, std::span<const NodePair> pairs) {
  auto [hl, hr] = participating_hubs(left, right, pairs);
  return hub_weight(left, right, pairs.size(), hl, hr);
}

WeightRatio ratio_e(std::size_t pairs, std::size_t cbg_max) {
  if (cbg_max == 0) throw Error(ErrorKind::EmptyCbg, "no meta edges to normalise");
  return to_ratio(Fraction{pairs, cbg_max});
}

WeightRatio ratio_d(const CommunitySummary& left, const CommunitySummary& right, std::size_t pairs) {
  auto f = multiply(density_fraction(left), edge_fraction(left, right, pairs));
  if (!f) return {};
  return to_ratio(multiply(*f, density_fraction(right)));
}

WeightRatio ratio_h(const CommunitySummary& left, const CommunitySummary& right, std::span<const NodePair> pairs) {
  auto [hl, hr] = participating_hubs(left, right, pairs);
  return hub_ratio(left, right, pairs.size(), hl, hr);
}

CommunityBipartiteGraph build_cbg(const MLN& mln, const LayerId& left, const LayerId& right,
                                  std::span<const std::uint32_t> u_left, std::span<const std::uint32_t> u_right,
                                  const LayerCommunities& left_communities,
                                  const LayerCommunities& right_communities, Metric metric) {
  auto [x, reversed] = mln.find_interlayer(left, right);
  if (!x) throw Error(ErrorKind::NoInterLayerEdges, left + "," + right);

  CommunityBipartiteGraph cbg;
  cbg.left_layer = left;
  cbg.right_layer = right;
  cbg.metric = metric;

  auto select = [](std::span<const std::uint32_t> u, const LayerCommunities& lc, std::vector<MetaNode>& out,
                   const LayerId& layer) {
    std::vector<bool> in(lc.summaries.size() + 1, false);
    std::vector<std::uint32_t> sorted(u.begin(), u.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto c : sorted) {
      if (c == 0 || c > lc.summaries.size()) {
        throw Error(ErrorKind::UnknownCommunity, "community " + std::to_string(c) + " of layer " + layer);
      }
      in[c] = true;
      out.push_back({lc.summary(c)});
    }
    return in;
  };
  auto in_left = select(u_left, left_communities, cbg.left_nodes, left);
  auto in_right = select(u_right, right_communities, cbg.right_nodes, right);

  using Key = std::pair<std::uint32_t, std::uint32_t>;
  std::vector<std::pair<Key, NodePair>> keyed;
  keyed.reserve(x->links.size());
  const auto& lm = left_communities.membership;
  const auto& rm = right_communities.membership;
  for (const auto& link : x->links) {
    NodePair p = reversed ? NodePair{link.second, link.first} : link;
    auto cl = lm.community_of(p.first);
    if (!in_left[cl]) continue;
    auto cr = rm.community_of(p.second);
    if (!in_right[cr]) continue;
    keyed.push_back({{cl, cr}, p});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::pair<Key, std::vector<NodePair>>> grouped;
  for (const auto& [k, p] : keyed) {
    if (grouped.empty() || grouped.back().first != k) grouped.push_back({k, {}});
    grouped.back().second.push_back(p);
  }

  std::size_t max_pairs = 0;
  for (const auto& [k, pairs] : grouped) max_pairs = std::max(max_pairs, pairs.size());

  for (auto& [k, pairs] : grouped) {
    const auto& ls = left_communities.summary(k.first);
    const auto& rs = right_communities.summary(k.second);
    MetaEdge e;
    e.left = k.first;
    e.right = k.second;
    switch (metric) {
      case Metric::Edges:
        e.raw_weight = static_cast<double>(pairs.size());
        e.weight = weight_e(pairs.size(), max_pairs);
        e.exact = ratio_e(pairs.size(), max_pairs);
        break;
      case Metric::Density:
        e.weight = e.raw_weight = weight_d(ls, rs, pairs.size());
        e.exact = ratio_d(ls, rs, pairs.size());
        break;
      case Metric::Hubs: {
        auto [hl, hr] = participating_hubs(ls, rs, pairs);
        e.weight = e.raw_weight = hub_weight(ls, rs, pairs.size(), hl, hr);
        e.exact = hub_ratio(ls, rs, pairs.size(), hl, hr);
        break;
      }
    }
    e.expanded = {ls.id, rs.id, std::move(pairs)};
    (e.weight > 0.0 ? cbg.edges : cbg.dropped).push_back(std::move(e));
  }
  return cbg;
}

}  // namespace kcomm

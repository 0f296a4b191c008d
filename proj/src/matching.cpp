#include "kcomm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "kcomm/error.hpp"

namespace kcomm {
namespace {

__extension__ typedef unsigned __int128 u128;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Edges of a CBG re-expressed on local indices (position in left_nodes / right_nodes).
struct Problem {
  int n_left = 0;
  int n_right = 0;
  std::vector<int> edge_left;
  std::vector<int> edge_right;
  std::vector<std::int64_t> weight;
};

Problem make_problem(const CommunityBipartiteGraph& cbg) {
  Problem p;
  p.n_left = static_cast<int>(cbg.left_nodes.size());
  p.n_right = static_cast<int>(cbg.right_nodes.size());
  auto local = [](const std::vector<MetaNode>& nodes, std::uint32_t index) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), index,
                               [](const MetaNode& n, std::uint32_t i) { return n.index() < i; });
    if (it == nodes.end() || it->index() != index) {
      throw Error(ErrorKind::UnknownCommunity, "meta edge endpoint " + std::to_string(index) + " is not a meta node");
    }
    return static_cast<int>(it - nodes.begin());
  };
  for (const auto& e : cbg.edges) {
    if (!(e.weight > 0.0)) throw Error(ErrorKind::InvariantViolation, "meta edge weights must be positive");
    p.edge_left.push_back(local(cbg.left_nodes, e.left));
    p.edge_right.push_back(local(cbg.right_nodes, e.right));
  }
  p.weight = integer_weights(cbg);
  return p;
}

MatchedPairs to_result(const CommunityBipartiteGraph& cbg, const std::vector<int>& chosen_edges) {
  MatchedPairs mp;
  std::vector<int> sorted(chosen_edges);
  std::sort(sorted.begin(), sorted.end());  // edges are stored in (left, right) order
  for (int e : sorted) {
    mp.pairs.emplace_back(cbg.edges[e].left, cbg.edges[e].right);
    mp.total_weight += cbg.edges[e].weight;
  }
  return mp;
}

// Residual network for successive shortest paths.
class FlowNetwork {
 public:
  struct Arc {
    int to;
    int cap;
    std::int64_t cost;
    int rev;
  };

  explicit FlowNetwork(int n) : adj_(n) {}

  int add_arc(int from, int to, int cap, std::int64_t cost) {
    adj_[from].push_back({to, cap, cost, static_cast<int>(adj_[to].size())});
    adj_[to].push_back({from, 0, -cost, static_cast<int>(adj_[from].size()) - 1});
    return static_cast<int>(adj_[from].size()) - 1;
  }

  int size() const { return static_cast<int>(adj_.size()); }
  std::vector<Arc>& arcs(int v) { return adj_[v]; }
  const Arc& arc(int v, int i) const { return adj_[v][i]; }

  // Breadth-first augmenting paths on capacities only (Edmonds-Karp).
  int max_flow(int s, int t) {
    int flow = 0;
    while (true) {
      std::vector<std::pair<int, int>> parent(adj_.size(), {-1, -1});
      parent[s] = {s, -1};
      std::queue<int> q;
      q.push(s);
      while (!q.empty() && parent[t].first == -1) {
        int v = q.front();
        q.pop();
        for (int i = 0; i < static_cast<int>(adj_[v].size()); ++i) {
          const auto& a = adj_[v][i];
          if (a.cap > 0 && parent[a.to].first == -1) {
            parent[a.to] = {v, i};
            q.push(a.to);
          }
        }
      }
      if (parent[t].first == -1) return flow;
      int bottleneck = std::numeric_limits<int>::max();
      for (int v = t; v != s; v = parent[v].first) {
        bottleneck = std::min(bottleneck, adj_[parent[v].first][parent[v].second].cap);
      }
      for (int v = t; v != s; v = parent[v].first) push(parent[v].first, parent[v].second, bottleneck);
      flow += bottleneck;
    }
  }

  void push(int v, int i, int amount) {
    auto& a = adj_[v][i];
    a.cap -= amount;
    adj_[a.to][a.rev].cap += amount;
  }

 private:
  std::vector<std::vector<Arc>> adj_;
};

// Maximum weight matching by successive shortest paths with Johnson
// potentials. Returns mate_left (right local index or -1).
std::vector<int> solve_max_weight(const Problem& p) {
  const int s = 0, t = p.n_left + p.n_right + 1;
  auto left_node = [](int l) { return 1 + l; };
  auto right_node = [&](int r) { return 1 + p.n_left + r; };
  FlowNetwork net(t + 1);
  for (int l = 0; l < p.n_left; ++l) net.add_arc(s, left_node(l), 1, 0);
  std::vector<int> edge_arc(p.weight.size());
  for (std::size_t e = 0; e < p.weight.size(); ++e) {
    edge_arc[e] = net.add_arc(left_node(p.edge_left[e]), right_node(p.edge_right[e]), 1, -p.weight[e]);
  }
  for (int r = 0; r < p.n_right; ++r) net.add_arc(right_node(r), t, 1, 0);

  // initial potentials: shortest distances in the layered DAG
  std::vector<std::int64_t> pot(net.size(), 0);
  for (std::size_t e = 0; e < p.weight.size(); ++e) {
    auto& pr = pot[right_node(p.edge_right[e])];
    pr = std::min(pr, -p.weight[e]);
  }
  for (int r = 0; r < p.n_right; ++r) pot[t] = std::min(pot[t], pot[right_node(r)]);

  std::vector<std::int64_t> dist(net.size());
  std::vector<std::pair<int, int>> parent(net.size());
  using Item = std::pair<std::int64_t, int>;
  std::vector<Item> heap;
  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), std::pair{-1, -1});
    heap.assign(1, {0, s});
    dist[s] = 0;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
      auto [d, v] = heap.back();
      heap.pop_back();
      if (d != dist[v]) continue;
      if (v == t) break;
      const auto& arcs = net.arcs(v);
      for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
        const auto& a = arcs[i];
        if (a.cap <= 0) continue;
        auto nd = d + a.cost + pot[v] - pot[a.to];
        if (nd < dist[a.to]) {
          dist[a.to] = nd;
          parent[a.to] = {v, i};
          heap.push_back({nd, a.to});
          std::push_heap(heap.begin(), heap.end(), std::greater<>{});
        }
      }
    }
    if (dist[t] >= kInf) break;
    if (dist[t] + pot[t] - pot[s] >= 0) break;  // further augmentation cannot add weight
    for (int v = 0; v < net.size(); ++v) pot[v] += std::min(dist[v], dist[t]);
    for (int v = t; v != s; v = parent[v].first) net.push(parent[v].first, parent[v].second, 1);
  }

  std::vector<int> mate(p.n_left, -1);
  for (std::size_t e = 0; e < p.weight.size(); ++e) {
    if (net.arc(left_node(p.edge_left[e]), edge_arc[e]).cap == 0) mate[p.edge_left[e]] = p.edge_right[e];
  }
  return mate;
}

// Optimal dual solution (y_left, y_right >= 0, y_l + y_r >= w, tight on
// matched edges, zero on unmatched nodes) from shortest-path potentials of
// the residual network in which edge and left->sink arcs are uncapacitated.
struct Duals {
  std::vector<std::int64_t> left;
  std::vector<std::int64_t> right;
};

Duals optimal_duals(const Problem& p, const std::vector<int>& mate_left) {
  const int t = p.n_left + p.n_right;
  auto right_node = [&](int r) { return p.n_left + r; };
  std::vector<int> mate_right(p.n_right, -1);
  for (int l = 0; l < p.n_left; ++l) {
    if (mate_left[l] >= 0) mate_right[mate_left[l]] = l;
  }

  struct Arc {
    int from, to;
    std::int64_t cost;
  };
  std::vector<Arc> arcs;
  for (std::size_t e = 0; e < p.weight.size(); ++e) {
    int l = p.edge_left[e], r = p.edge_right[e];
    arcs.push_back({l, right_node(r), -p.weight[e]});
    if (mate_left[l] == r) arcs.push_back({right_node(r), l, p.weight[e]});
  }
  for (int l = 0; l < p.n_left; ++l) {
    arcs.push_back({l, t, 0});
    if (mate_left[l] < 0) arcs.push_back({t, l, 0});
  }
  for (int r = 0; r < p.n_right; ++r) {
    if (mate_right[r] < 0) {
      arcs.push_back({right_node(r), t, 0});
    } else {
      arcs.push_back({t, right_node(r), 0});
    }
  }

  std::vector<std::vector<std::pair<int, std::int64_t>>> out(t + 1);
  for (const auto& a : arcs) out[a.from].emplace_back(a.to, a.cost);
  std::vector<std::int64_t> d(t + 1, 0);
  std::vector<int> relaxed(t + 1, 0);
  std::vector<char> queued(t + 1, 1);
  std::deque<int> queue;
  for (int v = 0; v <= t; ++v) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    queued[v] = 0;
    for (const auto& [to, cost] : out[v]) {
      if (d[v] + cost >= d[to]) continue;
      d[to] = d[v] + cost;
      if (++relaxed[to] > t + 1) {
        throw Error(ErrorKind::Internal, "matching is not weight-optimal (negative residual cycle)");
      }
      if (!queued[to]) {
        queued[to] = 1;
        queue.push_back(to);
      }
    }
  }

  Duals y{std::vector<std::int64_t>(p.n_left), std::vector<std::int64_t>(p.n_right)};
  for (int l = 0; l < p.n_left; ++l) y.left[l] = std::max<std::int64_t>(0, d[l] - d[t]);
  for (int r = 0; r < p.n_right; ++r) y.right[r] = std::max<std::int64_t>(0, d[t] - d[right_node(r)]);
  return y;
}

// Alternating-path repair inside the tight subgraph. `start` lives on side X
// and is uncovered but must be covered. Succeeds by augmenting to an
// uncovered Y node, or by re-routing so that some X node outside the
// must-cover set becomes uncovered instead.
bool repair(int start, const std::vector<std::vector<int>>& adj_x, std::vector<int>& mate_x,
            std::vector<int>& mate_y, const std::vector<char>& locked_y, const std::vector<char>& must_x) {
  const int ny = static_cast<int>(mate_y.size());
  const int nx = static_cast<int>(mate_x.size());
  std::vector<int> reached_from(ny, -1);  // Y node -> X node it was reached from
  std::vector<char> seen_x(nx, 0);
  std::deque<int> queue{start};
  seen_x[start] = 1;
  int end = -1;
  while (!queue.empty() && end < 0) {
    int x = queue.front();
    queue.pop_front();
    for (int y : adj_x[x]) {
      if (locked_y[y] || reached_from[y] >= 0 || mate_x[x] == y) continue;
      reached_from[y] = x;
      int next = mate_y[y];
      if (next < 0 || !must_x[next]) {
        end = y;
        break;
      }
      if (!seen_x[next]) {
        seen_x[next] = 1;
        queue.push_back(next);
      }
    }
  }
  if (end < 0) return false;
  if (mate_y[end] >= 0) mate_x[mate_y[end]] = -1;
  for (int y = end;;) {
    int x = reached_from[y];
    int previous = mate_x[x];
    mate_x[x] = y;
    mate_y[y] = x;
    if (x == start) break;
    y = previous;
  }
  return true;
}

// Among matchings of the tight subgraph covering every positive-dual node
// (exactly the weight-maximal matchings), pick the lexicographically
// smallest one by deciding left nodes in ascending order.
std::vector<int> lexicographic_optimum(const Problem& p, std::vector<int> mate_left, const Duals& y) {
  std::vector<std::vector<int>> tight_left(p.n_left), tight_right(p.n_right);
  for (std::size_t e = 0; e < p.weight.size(); ++e) {
    int l = p.edge_left[e], r = p.edge_right[e];
    if (y.left[l] + y.right[r] == p.weight[e]) {
      tight_left[l].push_back(r);
      tight_right[r].push_back(l);
    }
  }
  for (auto& v : tight_left) std::sort(v.begin(), v.end());
  for (auto& v : tight_right) std::sort(v.begin(), v.end());

  std::vector<char> must_left(p.n_left), must_right(p.n_right);
  for (int l = 0; l < p.n_left; ++l) must_left[l] = y.left[l] > 0;
  for (int r = 0; r < p.n_right; ++r) must_right[r] = y.right[r] > 0;

  std::vector<int> mate_right(p.n_right, -1);
  for (int l = 0; l < p.n_left; ++l) {
    if (mate_left[l] >= 0) mate_right[mate_left[l]] = l;
  }
  std::vector<char> locked_left(p.n_left, 0), locked_right(p.n_right, 0);

  auto try_fix = [&](int u, int v) {
    auto saved_left = mate_left;
    auto saved_right = mate_right;
    int a = mate_left[u];
    int b = mate_right[v];
    if (a >= 0) mate_right[a] = -1;
    if (b >= 0) mate_left[b] = -1;
    mate_left[u] = v;
    mate_right[v] = u;
    locked_left[u] = locked_right[v] = 1;
    bool ok = true;
    if (a >= 0 && must_right[a] && mate_right[a] < 0) {
      ok = repair(a, tight_right, mate_right, mate_left, locked_left, must_right);
    }
    if (ok && b >= 0 && must_left[b] && mate_left[b] < 0) {
      ok = repair(b, tight_left, mate_left, mate_right, locked_right, must_left);
    }
    if (!ok) {
      mate_left = std::move(saved_left);
      mate_right = std::move(saved_right);
      locked_left[u] = locked_right[v] = 0;
    }
    return ok;
  };

  for (int u = 0; u < p.n_left; ++u) {
    const int current = mate_left[u];
    bool fixed = false;
    for (int v : tight_left[u]) {
      if (locked_right[v]) continue;
      if (current >= 0 && v > current) break;
      if (v == current) {
        locked_left[u] = locked_right[v] = 1;
        fixed = true;
        break;
      }
      if (try_fix(u, v)) {
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      if (current >= 0) throw Error(ErrorKind::Internal, "tie-break lost a feasible pair");
      locked_left[u] = 1;
    }
  }
  return mate_left;
}

}  // namespace

bool MatchedPairs::contains(std::uint32_t left, std::uint32_t right) const {
  return std::binary_search(pairs.begin(), pairs.end(), std::pair{left, right});
}

std::vector<std::int64_t> integer_weights(const CommunityBipartiteGraph& cbg) {
  const auto& edges = cbg.edges;
  std::vector<std::int64_t> w(edges.size());
  const u128 budget = (static_cast<u128>(1) << 62) / (cbg.left_nodes.size() + cbg.right_nodes.size() + 2);

  bool exact = std::all_of(edges.begin(), edges.end(), [](const MetaEdge& e) { return e.exact.exact(); });
  if (exact) {
    u128 common = 1;
    for (const auto& e : edges) {
      u128 g = std::gcd(static_cast<std::uint64_t>(common % e.exact.den), e.exact.den);
      common = common / g * e.exact.den;
      if (common > budget) {
        exact = false;
        break;
      }
    }
    if (exact) {
      for (std::size_t i = 0; i < edges.size() && exact; ++i) {
        u128 v = static_cast<u128>(edges[i].exact.num) * (common / edges[i].exact.den);
        if (v > budget) exact = false;
        w[i] = static_cast<std::int64_t>(v);
      }
    }
  }
  if (!exact) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      w[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::nearbyint(edges[i].weight * 1e9)));
    }
  }
  return w;
}

MatchedPairs max_flow_match(const CommunityBipartiteGraph& cbg) {
  if (cbg.edges.empty()) return {};
  const auto p = make_problem(cbg);
  auto mate = solve_max_weight(p);
  const auto y = optimal_duals(p, mate);
  mate = lexicographic_optimum(p, std::move(mate), y);

  std::vector<int> chosen;
  std::int64_t achieved = 0;
  for (std::size_t e = 0; e < p.weight.size(); ++e) {
    if (mate[p.edge_left[e]] == p.edge_right[e]) {
      chosen.push_back(static_cast<int>(e));
      achieved += p.weight[e];
    }
  }
  const auto bound = std::accumulate(y.left.begin(), y.left.end(), std::int64_t{0}) +
                     std::accumulate(y.right.begin(), y.right.end(), std::int64_t{0});
  if (achieved != bound) throw Error(ErrorKind::Internal, "matching weight differs from its dual bound");
  return to_result(cbg, chosen);
}

MatchedPairs brute_force_match(const CommunityBipartiteGraph& cbg) {
  if (cbg.left_nodes.size() + cbg.right_nodes.size() > 16) {
    throw Error(ErrorKind::TooLarge, "exhaustive matching is limited to 16 meta nodes");
  }
  if (cbg.edges.empty()) return {};
  const auto p = make_problem(cbg);
  std::vector<std::vector<int>> by_left(p.n_left);
  for (std::size_t e = 0; e < p.weight.size(); ++e) by_left[p.edge_left[e]].push_back(static_cast<int>(e));

  std::vector<int> current, best;
  std::vector<std::pair<int, int>> current_seq, best_seq;
  std::int64_t best_weight = -1;
  std::vector<char> used(p.n_right, 0);

  std::function<void(int, std::int64_t)> visit = [&](int l, std::int64_t acc) {
    if (l == p.n_left) {
      if (acc > best_weight || (acc == best_weight && current_seq < best_seq)) {
        best_weight = acc;
        best = current;
        best_seq = current_seq;
      }
      return;
    }
    visit(l + 1, acc);
    for (int e : by_left[l]) {
      int r = p.edge_right[e];
      if (used[r]) continue;
      used[r] = 1;
      current.push_back(e);
      current_seq.emplace_back(l, r);
      visit(l + 1, acc + p.weight[e]);
      current_seq.pop_back();
      current.pop_back();
      used[r] = 0;
    }
  };
  visit(0, 0);
  return to_result(cbg, best);
}

std::size_t max_cardinality(const CommunityBipartiteGraph& cbg) {
  const auto p = make_problem(cbg);
  const int s = 0, t = p.n_left + p.n_right + 1;
  FlowNetwork net(t + 1);
  for (int l = 0; l < p.n_left; ++l) net.add_arc(s, 1 + l, 1, 0);
  for (std::size_t e = 0; e < p.weight.size(); ++e) {
    net.add_arc(1 + p.edge_left[e], 1 + p.n_left + p.edge_right[e], 1, 0);
  }
  for (int r = 0; r < p.n_right; ++r) net.add_arc(1 + p.n_left + r, t, 1, 0);
  return static_cast<std::size_t>(net.max_flow(s, t));
}

}  // namespace kcomm

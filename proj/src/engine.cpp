#include "kcomm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "kcomm/error.hpp"

namespace kcomm {
namespace {

std::size_t slot_of(const std::vector<LayerId>& layers, const LayerId& layer) {
  auto it = std::find(layers.begin(), layers.end(), layer);
  return it == layers.end() ? layers.size() : static_cast<std::size_t>(it - layers.begin());
}

const LayerCommunities& communities_of(const CommunityTable& table, const LayerId& layer) {
  auto it = table.find(layer);
  if (it == table.end()) throw Error(ErrorKind::UnknownLayer, "no communities for layer " + layer);
  return it->second;
}

std::vector<std::uint32_t> slot_values(const std::vector<KTuple>& tuples, std::size_t slot) {
  std::set<std::uint32_t> u;
  for (const auto& t : tuples) {
    if (t.community_slots[slot] != 0) u.insert(t.community_slots[slot]);
  }
  return {u.begin(), u.end()};
}

}  // namespace

bool KTuple::total() const {
  return std::all_of(community_slots.begin(), community_slots.end(), [](auto c) { return c != 0; }) &&
         std::all_of(x_slots.begin(), x_slots.end(), [](const auto& x) { return x.has_value(); });
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> select_u(const MLN& mln, const Composition& step,
                                                                           const std::vector<LayerId>& layers,
                                                                           const std::vector<KTuple>& tuples,
                                                                           const CommunityTable& communities) {
  const auto left_slot = slot_of(layers, step.left);
  const auto right_slot = slot_of(layers, step.right);
  const bool left_known = left_slot < layers.size();
  const bool right_known = right_slot < layers.size();

  std::vector<std::uint32_t> u_left, u_right;
  if (left_known) u_left = slot_values(tuples, left_slot);
  if (right_known) u_right = slot_values(tuples, right_slot);
  if (left_known && right_known) return {u_left, u_right};

  auto [x, reversed] = mln.find_interlayer(step.left, step.right);
  if (!x) throw Error(ErrorKind::MissingInterLayerEdges, step.left + "," + step.right);
  const auto& lm = communities_of(communities, step.left).membership;
  const auto& rm = communities_of(communities, step.right).membership;

  std::vector<char> allowed_left(lm.community_count() + 1, left_known ? 0 : 1);
  std::vector<char> allowed_right(rm.community_count() + 1, right_known ? 0 : 1);
  for (auto c : u_left) allowed_left[c] = 1;
  for (auto c : u_right) allowed_right[c] = 1;

  std::vector<char> hit_left(allowed_left.size(), 0), hit_right(allowed_right.size(), 0);
  for (const auto& link : x->links) {
    auto cl = lm.community_of(reversed ? link.second : link.first);
    auto cr = rm.community_of(reversed ? link.first : link.second);
    if (!allowed_left[cl] || !allowed_right[cr]) continue;
    hit_left[cl] = hit_right[cr] = 1;
  }
  auto collect = [](const std::vector<char>& hit) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 1; c < hit.size(); ++c) {
      if (hit[c]) out.push_back(c);
    }
    return out;
  };
  if (!left_known) u_left = collect(hit_left);
  if (!right_known) u_right = collect(hit_right);
  return {u_left, u_right};
}

KCommunityResult detect_k_community(const MLN& mln, const CommunityTable& communities, const KSpec& spec,
                                    Metric default_metric) {
  if (spec.steps.empty()) throw Error(ErrorKind::EmptySpec, "specification has no compositions");
  KCommunityResult result;
  result.spec = spec;
  for (const auto& layer : spec.layer_order()) result.summaries[layer] = communities_of(communities, layer).summaries;

  auto& layers = result.layers;
  auto& tuples = result.tuples;
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    const auto& step = spec.steps[i];
    const auto started = std::chrono::steady_clock::now();
    StepDiagnostics diag;
    diag.step = step;
    diag.metric = step.metric.value_or(default_metric);

    const auto& lc = communities_of(communities, step.left);
    const auto& rc = communities_of(communities, step.right);
    std::tie(diag.u_left, diag.u_right) = select_u(mln, step, layers, tuples, communities);
    const auto cbg = build_cbg(mln, step.left, step.right, diag.u_left, diag.u_right, lc, rc, diag.metric);
    diag.cbg_edges = cbg.edges.size();
    diag.cbg_dropped = cbg.dropped.size();
    diag.matched = max_flow_match(cbg);
    if (diag.matched.pairs.size() > max_cardinality(cbg)) {
      throw Error(ErrorKind::Internal, "matching exceeds the maximum cardinality of its CBG");
    }

    std::map<std::uint32_t, std::uint32_t> partner_of_left, partner_of_right;
    for (const auto& [l, r] : diag.matched.pairs) {
      partner_of_left[l] = r;
      partner_of_right[r] = l;
    }
    auto expanded = [&](std::uint32_t l, std::uint32_t r) {
      const auto* e = cbg.find(l, r);
      if (!e) throw Error(ErrorKind::Internal, "matched pair without a meta edge");
      return e->expanded;
    };

    if (i == 0) {
      layers = {step.left, step.right};
      for (const auto& [l, r] : diag.matched.pairs) {
        tuples.push_back({{l, r}, {expanded(l, r)}});
        ++diag.consistent;
      }
    } else {
      const auto ls = slot_of(layers, step.left);
      const auto rs = slot_of(layers, step.right);
      if (ls == layers.size()) throw Error(ErrorKind::InternalCaseError, "left layer " + step.left + " not processed");
      const bool case_ii = rs < layers.size();
      if (case_ii != step.revisit) throw Error(ErrorKind::InternalCaseError, "step annotation disagrees with state");
      if (!case_ii) layers.push_back(step.right);

      std::set<std::uint32_t> seen_right;
      for (auto& t : tuples) {
        const auto cl = t.community_slots[ls];
        auto pl = partner_of_left.find(cl);
        if (!case_ii) {
          if (cl != 0 && pl != partner_of_left.end()) {
            t.community_slots.push_back(pl->second);
            t.x_slots.push_back(expanded(cl, pl->second));
            ++diag.consistent;
            if (!seen_right.insert(pl->second).second) ++diag.converged;
          } else {
            t.community_slots.push_back(0);
            t.x_slots.push_back(std::nullopt);
            ++diag.no_match;
          }
          continue;
        }
        const auto cr = t.community_slots[rs];
        auto pr = partner_of_right.find(cr);
        const bool left_matched = cl != 0 && pl != partner_of_left.end();
        const bool right_matched = cr != 0 && pr != partner_of_right.end();
        if (left_matched && right_matched && pl->second == cr) {
          t.x_slots.push_back(expanded(cl, cr));
          ++diag.consistent;
        } else if ((left_matched && cr != 0) || (right_matched && cl != 0)) {
          t.x_slots.push_back(std::nullopt);
          ++diag.inconsistent;
        } else {
          t.x_slots.push_back(std::nullopt);
          ++diag.no_match;
        }
      }
    }
    diag.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.steps.push_back(std::move(diag));
  }
  return result;
}

std::pair<std::vector<KTuple>, std::vector<KTuple>> classify(const KCommunityResult& result) {
  std::pair<std::vector<KTuple>, std::vector<KTuple>> out;
  for (const auto& t : result.tuples) (t.total() ? out.first : out.second).push_back(t);
  return out;
}

RankKey parse_rank_key(std::string_view s) {
  if (s == "min_size") return RankKey::MinSize;
  if (s == "sum_size") return RankKey::SumSize;
  if (s == "min_density") return RankKey::MinDensity;
  if (s == "sum_raw_pairs") return RankKey::SumRawPairs;
  throw Error(ErrorKind::UnknownKey, std::string(s));
}

std::string_view to_string(RankKey key) {
  switch (key) {
    case RankKey::MinSize: return "min_size";
    case RankKey::SumSize: return "sum_size";
    case RankKey::MinDensity: return "min_density";
    case RankKey::SumRawPairs: return "sum_raw_pairs";
  }
  return "";
}

std::vector<KTuple> rank(const KCommunityResult& result, RankKey key) {
  auto summary = [&](std::size_t slot, std::uint32_t c) -> const CommunitySummary& {
    auto it = result.summaries.find(result.layers.at(slot));
    if (it == result.summaries.end() || c == 0 || c > it->second.size()) {
      throw Error(ErrorKind::UnknownCommunity, "no summary for community " + std::to_string(c) + " of layer " +
                                                   result.layers.at(slot));
    }
    return it->second[c - 1];
  };

  struct Scored {
    bool has_zero;
    double value;
    const KTuple* tuple;
  };
  std::vector<Scored> scored;
  for (const auto& t : result.tuples) {
    Scored s{false, 0.0, &t};
    bool first = true;
    for (std::size_t i = 0; i < t.community_slots.size(); ++i) {
      const auto c = t.community_slots[i];
      if (c == 0) {
        s.has_zero = true;
        continue;
      }
      const auto& cs = summary(i, c);
      double v = key == RankKey::MinDensity ? cs.density : static_cast<double>(cs.node_count);
      if (key == RankKey::SumSize) {
        s.value += v;
      } else if (key != RankKey::SumRawPairs) {
        s.value = first ? v : std::min(s.value, v);
        first = false;
      }
    }
    if (key == RankKey::MinSize && s.has_zero) s.value = 0.0;
    if (key == RankKey::SumRawPairs) {
      for (const auto& x : t.x_slots) {
        if (x) s.value += static_cast<double>(x->pairs.size());
      }
    }
    scored.push_back(s);
  }

  const bool min_key = key == RankKey::MinSize || key == RankKey::MinDensity;
  std::stable_sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (min_key && a.has_zero != b.has_zero) return !a.has_zero;
    if (a.value != b.value) return a.value > b.value;
    return a.tuple->community_slots < b.tuple->community_slots;
  });
  std::vector<KTuple> out;
  for (const auto& s : scored) out.push_back(*s.tuple);
  return out;
}

}  // namespace kcomm

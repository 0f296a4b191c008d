#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "kcomm/cli.hpp"
#include "kcomm/engine.hpp"
#include "kcomm/error.hpp"
#include "kcomm/imdb.hpp"
#include "kcomm/io.hpp"
#include "support.hpp"

using namespace kcomm;
using Clock = std::chrono::steady_clock;

namespace {

__extension__ typedef unsigned __int128 u128;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

CommunityBipartiteGraph base_cbg(const test::Instance& inst, const LayerId& l, const LayerId& r, Metric m) {
  auto [ul, ur] = select_u(inst.mln, {l, r, std::nullopt, false}, {}, {}, inst.communities);
  return build_cbg(inst.mln, l, r, ul, ur, inst.communities.at(l), inst.communities.at(r), m);
}

std::string tuples_text(const KCommunityResult& r) {
  std::ostringstream s;
  write_tuple_text(s, r);
  return s.str();
}

KCommunityResult run(const test::Instance& inst, const KSpec& spec) {
  return detect_k_community(inst.mln, inst.communities, validate_spec(spec, inst.mln), Metric::Edges);
}

std::vector<test::Instance> random_corpus() {
  test::Rng rng(4004);
  std::vector<test::Instance> out;
  for (int i = 0; i < 100; ++i) out.push_back(test::random_instance(rng));
  return out;
}

const std::vector<test::Instance>& corpus() {
  static const auto c = random_corpus();
  return c;
}

Outcome c1_matching_oracle() {
  test::Rng rng(1);
  const auto start = Clock::now();
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    auto cbg = test::random_cbg(rng, 7);
    auto fast = max_flow_match(cbg);
    auto slow = brute_force_match(cbg);
    if (fast.pairs != slow.pairs || std::abs(fast.total_weight - slow.total_weight) > 1e-9) ++mismatches;
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 10.0,
          std::to_string(mismatches) + " mismatches in 500 CBGs, " + std::to_string(t) + " s"};
}

Outcome c2_edge_density() {
  test::Rng rng(2);
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    auto inst = test::clique_instance(rng, true, false);
    const u128 p = inst.communities.at("L").summaries[0].node_count;
    const u128 q = inst.communities.at("R").summaries[0].node_count;
    auto e = base_cbg(inst, "L", "R", Metric::Edges);
    auto d = base_cbg(inst, "L", "R", Metric::Density);
    bool ok = e.edges.size() == d.edges.size() && max_flow_match(e).pairs == max_flow_match(d).pairs;
    for (const auto& edge : d.edges) {
      // omega_d == |pairs| / (p q) exactly
      const u128 pairs = edge.expanded.pairs.size();
      ok = ok && edge.exact.exact() && static_cast<u128>(edge.exact.num) * p * q == pairs * edge.exact.den;
    }
    failures += !ok;
  }
  return {failures == 0, std::to_string(failures) + " of 50 instances violate pair equality or 1/(pq) scaling"};
}

Outcome c3_density_hub() {
  test::Rng rng(3);
  int failures = 0, condition_misses = 0;
  for (int i = 0; i < 50; ++i) {
    auto inst = test::clique_instance(rng, false, true);
    auto d = base_cbg(inst, "L", "R", Metric::Density);
    auto h = base_cbg(inst, "L", "R", Metric::Hubs);
    bool ok = d.edges.size() == h.edges.size() && max_flow_match(d).pairs == max_flow_match(h).pairs;
    for (std::size_t j = 0; ok && j < d.edges.size(); ++j) {
      const auto& ed = d.edges[j];
      // |v_i| |v_k| == |H_ik| |H_ki|, counted from the summaries and links
      const auto& ls = inst.communities.at("L").summary(ed.left);
      const auto& rs = inst.communities.at("R").summary(ed.right);
      std::set<NodeId> hl, hr;
      for (const auto& [a, b] : ed.expanded.pairs) {
        if (std::binary_search(ls.hubs.begin(), ls.hubs.end(), a)) hl.insert(a);
        if (std::binary_search(rs.hubs.begin(), rs.hubs.end(), b)) hr.insert(b);
      }
      if (ls.node_count * rs.node_count != hl.size() * hr.size()) ++condition_misses;
      ok = ed.left == h.edges[j].left && ed.right == h.edges[j].right && ed.exact == h.edges[j].exact &&
           ed.exact.exact();
    }
    failures += !ok;
  }
  return {failures == 0 && condition_misses == 0,
          std::to_string(failures) + " of 50 instances differ, " + std::to_string(condition_misses) +
              " edges outside the hub-product condition"};
}

Outcome c4_arity() {
  test::Rng rng(44);
  std::size_t tuples = 0, violations = 0, triangles = 0, triangle_violations = 0;
  for (const auto& inst : corpus()) {
    auto spec = test::random_spec(rng, inst.mln);
    auto r = run(inst, spec);
    const auto k = spec.k();
    const auto x = (k - 1) + spec.cycle_steps();
    for (const auto& t : r.tuples) {
      ++tuples;
      if (t.community_slots.size() != k || t.x_slots.size() != x) ++violations;
    }
    if (inst.mln.has_interlayer("G1", "G2") && inst.mln.has_interlayer("G2", "G3") &&
        inst.mln.has_interlayer("G3", "G1")) {
      ++triangles;
      auto tri = run(inst, parse_spec("G1 # G2 # G3 #(G3,G1) G1"));
      for (const auto& t : tri.tuples) triangle_violations += t.x_slots.size() != 3 || t.community_slots.size() != 3;
    }
  }
  return {violations == 0 && triangles > 0 && triangle_violations == 0,
          std::to_string(tuples) + " tuples, " + std::to_string(violations) + " arity violations; " +
              std::to_string(triangles) + " cyclic 3-specs, " + std::to_string(triangle_violations) +
              " without 3 x-slots"};
}

Outcome c5_base_bound() {
  test::Rng rng(44);  // same specs as the arity check
  std::size_t violations = 0, checked = 0;
  for (const auto& inst : corpus()) {
    auto spec = test::random_spec(rng, inst.mln);
    auto full = run(inst, spec);
    const auto& base = full.steps.front();
    if (full.tuples.size() > std::min(base.u_left.size(), base.u_right.size())) ++violations;
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (std::size_t n = 1; n <= spec.steps.size(); ++n) {
      KSpec prefix{spec.first_layer, {spec.steps.begin(), spec.steps.begin() + static_cast<std::ptrdiff_t>(n)}};
      auto count = run(inst, prefix).tuples.size();
      if (count > previous) ++violations;
      previous = count;
      ++checked;
    }
  }
  return {violations == 0, std::to_string(checked) + " spec prefixes, " + std::to_string(violations) + " violations"};
}

Outcome c6_running_example() {
  auto inst = test::load_fixture();
  const std::string acyclic =
      "< c_G1^1, c_G2^3, 0 ; x_{G1,G2}, phi >\n"
      "< c_G1^2, c_G2^1, c_G3^2 ; x_{G1,G2}, x_{G2,G3} >\n"
      "< c_G1^3, c_G2^5, 0 ; x_{G1,G2}, phi >\n";
  const std::string cyclic =
      "< c_G1^1, c_G2^3, 0 ; x_{G1,G2}, phi, phi >\n"
      "< c_G1^2, c_G2^1, c_G3^2 ; x_{G1,G2}, x_{G2,G3}, x_{G3,G1} >\n"
      "< c_G1^3, c_G2^5, 0 ; x_{G1,G2}, phi, phi >\n";
  auto a = run(inst, parse_spec("G1 #(G1,G2) G2 #(G2,G3) G3"));
  auto c = run(inst, parse_spec("G1 #(G1,G2) G2 #(G2,G3) G3 #(G3,G1) G1"));
  const bool ok_a = tuples_text(a) == acyclic && classify(a).first.size() == 1;
  const bool ok_c = tuples_text(c) == cyclic && classify(c).first.size() == 1;
  return {ok_a && ok_c, std::string("acyclic ") + (ok_a ? "exact" : "differs") + ", cyclic " +
                            (ok_c ? "exact" : "differs")};
}

Outcome c7_metric_domains() {
  std::vector<const test::Instance*> all;
  std::vector<test::Instance> cliques;
  test::Rng rng(7);
  for (int i = 0; i < 50; ++i) cliques.push_back(test::clique_instance(rng, i % 2 == 0, i % 3 == 0));
  for (const auto& c : cliques) all.push_back(&c);
  for (const auto& c : corpus()) all.push_back(&c);
  all.push_back(nullptr);  // the running example
  const auto fixture = test::load_fixture();

  std::size_t cbgs = 0, violations = 0;
  for (const auto* inst : all) {
    const auto& in = inst ? *inst : fixture;
    for (const auto* x : in.mln.interlayers()) {
      for (auto [l, r] : {std::pair{x->from_layer, x->to_layer}, std::pair{x->to_layer, x->from_layer}}) {
        auto e = base_cbg(in, l, r, Metric::Edges);
        auto d = base_cbg(in, l, r, Metric::Density);
        auto h = base_cbg(in, l, r, Metric::Hubs);
        cbgs += 3;
        double max_e = 0.0;
        for (const auto& m : e.edges) {
          violations += !(m.weight > 0.0 && m.weight <= 1.0);
          max_e = std::max(max_e, m.weight);
        }
        violations += !e.edges.empty() && max_e != 1.0;
        violations += !e.dropped.empty();
        for (const auto& m : d.edges) violations += !(m.weight > 0.0 && m.weight <= 1.0);
        violations += !d.dropped.empty();
        for (const auto& m : h.edges) violations += !(m.weight > 0.0 && m.weight <= 1.0);
        for (const auto& m : h.dropped) violations += m.weight != 0.0;
      }
    }
  }
  return {violations == 0, std::to_string(cbgs) + " CBGs, " + std::to_string(violations) + " out-of-domain weights"};
}

Outcome c8_non_associativity() {
  auto inst = test::load_fixture();
  auto canonical = [](const KCommunityResult& r) {
    std::set<std::map<LayerId, std::uint32_t>> out;
    for (const auto& t : r.tuples) {
      std::map<LayerId, std::uint32_t> m;
      for (std::size_t i = 0; i < t.community_slots.size(); ++i) m[r.layers[i]] = t.community_slots[i];
      out.insert(m);
    }
    return out;
  };
  auto forward = canonical(run(inst, parse_spec("G1 # G2 # G3")));
  auto backward = canonical(run(inst, parse_spec("(G3 # G2) # G1")));
  return {forward != backward, std::to_string(forward.size()) + " vs " + std::to_string(backward.size()) +
                                   " tuples, sets " + (forward != backward ? "differ" : "equal")};
}

Outcome c9_cost_structure() {
  constexpr int kRepeats = 3;
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const auto total_start = Clock::now();
  const auto mln = test::planted_mln(9, 20000);
  std::vector<double> detection(kRepeats, 0.0);
  double summaries = 0.0;
  CommunityTable table;
  std::size_t edges = 0;
  for (const auto& [id, g] : mln.layers()) {
    edges += g.edge_count();
    Membership m;
    for (auto& d : detection) {
      auto t = Clock::now();
      m = detect_communities(g, 9);
      d += seconds_since(t);
    }
    auto t = Clock::now();
    table.emplace(id, make_layer_communities(g, std::move(m), kDefaultHubQuantile));
    summaries += seconds_since(t);
  }
  const auto spec = validate_spec(parse_spec("P1 # P2 # P3 #(P3,P1) P1"), mln);
  std::vector<double> composition;
  std::size_t tuples = 0;
  for (int i = 0; i < kRepeats; ++i) {
    const auto t = Clock::now();
    auto r = detect_k_community(mln, table, spec, Metric::Hubs);
    composition.push_back(seconds_since(t));
    tuples = r.tuples.size();
  }
  const double det = median(detection), comp = median(composition);
  const double total = seconds_since(total_start);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "median of %d: detection %.3f s, summaries %.3f s, composition %.3f s (%.1f%% of detection), "
                "total %.1f s, %zu edges, %zu tuples",
                kRepeats, det, summaries, comp, 100.0 * comp / det, total, edges, tuples);
  return {comp < 0.25 * det && total < 60.0, buf};
}

Outcome c10_determinism() {
  const auto in = test::scratch_dir("accept_det_in");
  test::Rng rng(10);
  save_mln_dir(test::random_instance(rng).mln, in);
  std::vector<std::filesystem::path> outs = {test::scratch_dir("accept_det_a"), test::scratch_dir("accept_det_b")};
  for (const auto& out : outs) {
    std::ostringstream o, e;
    std::vector<std::string> args = {"kcommunity", "--mln", in.string(), "--spec", "G1 # G2 # G3", "--metric", "h",
                                     "--seed", "11", "--out", out.string()};
    if (run_cli(args, o, e) != 0) return {false, "kcommunity failed: " + e.str()};
    std::vector<std::string> detect = {"detect", "--layer", (in / "layer_G1.tsv").string(), "--seed", "11", "--out",
                                       (out / "detect_G1.tsv").string()};
    if (run_cli(detect, o, e) != 0) return {false, "detect failed: " + e.str()};
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : std::filesystem::directory_iterator(outs[0])) {
    if (entry.path().filename() == "timing.tsv") continue;
    ++files;
    differing += test::read_text(entry.path()) != test::read_text(outs[1] / entry.path().filename());
  }
  return {files >= 8 && differing == 0,
          std::to_string(files) + " files compared, " + std::to_string(differing) + " differ"};
}

Outcome c11_imdb() {
  const auto dir = test::data_dir() / "imdb_mini";
  const auto mln = ingest_imdb(
      load_imdb_records(dir / "movies.tsv", dir / "people.tsv", dir / "acts.tsv", dir / "directs.tsv"));
  // counted by hand from the 30 data rows:
  //   actors p1..p4, A-edges p1p2 p1p3 p2p3 (m1) p1p4 (m2)
  //   directors p4..p7, genre sets p5 {Drama,Crime} p6 {Drama,Comedy} p7 {Comedy,Romance} p4 {Horror}
  //   D-edges p5p6 and p6p7 (overlap 1/2 each)
  //   movies m1..m6, classes 7.9 [6-8), 8.0 [8-10], 8.5 [8-10], 6.1 [6-8), m5 unrated, 2.0 [2-4)
  //   M-edges m1m4 and m2m3
  //   A-D links 10, D-M links 7, A-M links 9
  struct Expect {
    LayerId layer;
    std::size_t nodes, edges;
  };
  std::size_t wrong = 0;
  for (const auto& e : {Expect{"A", 4, 4}, Expect{"D", 4, 2}, Expect{"M", 6, 2}}) {
    wrong += mln.layer(e.layer).node_count() != e.nodes || mln.layer(e.layer).edge_count() != e.edges;
  }
  wrong += mln.interlayer("A", "D")->links.size() != 10;
  wrong += mln.interlayer("D", "M")->links.size() != 7;
  wrong += mln.interlayer("A", "M")->links.size() != 9;
  // ids: actors 0-3, directors 4-7, movies 8-13; m1 (7.9) = 8, m2 (8.0) = 9, m3 (8.5) = 10
  const auto& movies = mln.layer("M");
  const auto m1 = movies.neighbors(NodeId(8));
  const auto m2 = movies.neighbors(NodeId(9));
  wrong += std::find(m1.begin(), m1.end(), NodeId(9)) != m1.end();
  wrong += m2 != std::vector<NodeId>{NodeId(10)};
  return {wrong == 0, std::to_string(wrong) + " hand-counted totals differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1 matching oracle equivalence", c1_matching_oracle},
      {"C2 edge/density pair equivalence on equi-sized cliques", c2_edge_density},
      {"C3 density/hub equivalence under the hub-product condition", c3_density_hub},
      {"C4 arity law", c4_arity},
      {"C5 base-case bound", c5_base_bound},
      {"C6 running-example fixture", c6_running_example},
      {"C7 metric domains", c7_metric_domains},
      {"C8 non-associativity witness", c8_non_associativity},
      {"C9 cost structure", c9_cost_structure},
      {"C10 determinism", c10_determinism},
      {"C11 IMDb-style ingestion", c11_imdb},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

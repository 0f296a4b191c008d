#include <doctest.h>

#include <set>
#include <sstream>

#include "kcomm/engine.hpp"
#include "kcomm/error.hpp"
#include "kcomm/io.hpp"
#include "support.hpp"

using namespace kcomm;

namespace {

std::string tuples_text(const KCommunityResult& r) {
  std::ostringstream s;
  write_tuple_text(s, r);
  return s.str();
}

KCommunityResult run(const test::Instance& inst, const std::string& text, Metric metric = Metric::Edges) {
  return detect_k_community(inst.mln, inst.communities, validate_spec(parse_spec(text), inst.mln), metric);
}

ExpandedEdgeSet pairs_of_size(std::size_t n) {
  ExpandedEdgeSet x;
  for (std::uint32_t i = 0; i < n; ++i) x.pairs.emplace_back(NodeId(i), NodeId(100 + i));
  return x;
}

// three layers whose community c has size sizes[layer][c - 1]
KCommunityResult ranked_fixture(const std::vector<std::vector<std::size_t>>& sizes) {
  KCommunityResult r;
  r.layers = {"A", "B", "C"};
  for (std::size_t l = 0; l < 3; ++l) {
    for (std::size_t c = 0; c < sizes[l].size(); ++c) {
      CommunitySummary s;
      s.id = {r.layers[l], static_cast<std::uint32_t>(c + 1)};
      s.node_count = sizes[l][c];
      s.density = 1.0 / static_cast<double>(sizes[l][c]);
      r.summaries[r.layers[l]].push_back(s);
    }
  }
  return r;
}

}  // namespace

TEST_CASE("running example, acyclic") {
  auto r = run(test::load_fixture(), "G1 #(G1,G2) G2 #(G2,G3) G3");
  CHECK(tuples_text(r) ==
        "< c_G1^1, c_G2^3, 0 ; x_{G1,G2}, phi >\n"
        "< c_G1^2, c_G2^1, c_G3^2 ; x_{G1,G2}, x_{G2,G3} >\n"
        "< c_G1^3, c_G2^5, 0 ; x_{G1,G2}, phi >\n");
  auto [total, partial] = classify(r);
  CHECK(total.size() == 1);
  CHECK(partial.size() == 2);
  CHECK(r.k() == 3);

  const auto& x = *r.tuples[1].x_slots[1];
  CHECK(x.left_community == CommunityId{"G2", 1});
  CHECK(x.right_community == CommunityId{"G3", 2});
  CHECK(x.pairs.size() == 3);

  REQUIRE(r.steps.size() == 2);
  CHECK(r.steps[1].u_left == std::vector<std::uint32_t>{1, 3, 5});
  CHECK(r.steps[1].u_right == std::vector<std::uint32_t>{2});
  CHECK(r.steps[1].consistent == 1);
  CHECK(r.steps[1].no_match == 2);
}

TEST_CASE("running example, cyclic") {
  auto r = run(test::load_fixture(), "G1 #(G1,G2) G2 #(G2,G3) G3 #(G3,G1) G1");
  CHECK(tuples_text(r) ==
        "< c_G1^1, c_G2^3, 0 ; x_{G1,G2}, phi, phi >\n"
        "< c_G1^2, c_G2^1, c_G3^2 ; x_{G1,G2}, x_{G2,G3}, x_{G3,G1} >\n"
        "< c_G1^3, c_G2^5, 0 ; x_{G1,G2}, phi, phi >\n");
  for (const auto& t : r.tuples) CHECK(t.x_slots.size() == 3);
}

TEST_CASE("composition order matters") {
  auto inst = test::load_fixture();
  auto forward = run(inst, "G1 # G2 # G3");
  auto backward = run(inst, "(G3 # G2) # G1");
  CHECK(tuples_text(backward) ==
        "< c_G3^1, c_G2^2, c_G1^1 ; x_{G3,G2}, x_{G2,G1} >\n"
        "< c_G3^2, c_G2^1, c_G1^2 ; x_{G3,G2}, x_{G2,G1} >\n");
  CHECK(classify(backward).first.size() == 2);
  CHECK(tuples_text(forward) != tuples_text(backward));
}

TEST_CASE("base case is commutative") {
  auto inst = test::load_fixture();
  auto ab = run(inst, "G1 # G2");
  auto ba = run(inst, "G2 # G1");
  REQUIRE(ab.tuples.size() == ba.tuples.size());
  std::set<std::pair<std::uint32_t, std::uint32_t>> x, y;
  for (const auto& t : ab.tuples) x.emplace(t.community_slots[0], t.community_slots[1]);
  for (const auto& t : ba.tuples) y.emplace(t.community_slots[1], t.community_slots[0]);
  CHECK(x == y);
}

TEST_CASE("processed layers restrict the candidate sets") {
  auto inst = test::load_fixture();
  const Composition step{"G2", "G3", std::nullopt, false};
  std::vector<KTuple> tuples{{{1, 3}, {}}, {{2, 1}, {}}, {{3, 0}, {}}};
  auto [ul, ur] = select_u(inst.mln, step, {"G1", "G2"}, tuples, inst.communities);
  CHECK(ul == std::vector<std::uint32_t>{1, 3});
  CHECK(ur == std::vector<std::uint32_t>{2});

  std::vector<KTuple> zeros{{{1, 0}, {}}};
  auto [zl, zr] = select_u(inst.mln, step, {"G1", "G2"}, zeros, inst.communities);
  CHECK(zl.empty());
  CHECK(zr.empty());

  auto [bl, br] = select_u(inst.mln, {"G1", "G2", std::nullopt, false}, {}, {}, inst.communities);
  CHECK(bl == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(br == std::vector<std::uint32_t>{1, 2, 3, 5});
}

TEST_CASE("per-step metrics and empty base cases") {
  auto inst = test::load_fixture();
  auto hubs = run(inst, "G1 #(G1,G2):h G2", Metric::Edges);
  CHECK(hubs.steps[0].metric == Metric::Hubs);
  CHECK(hubs.steps[0].cbg_dropped == 1);

  // no inter-layer links at all: nothing to pair
  test::Instance lonely;
  auto [a, am] = test::clique_layer("A", 1, {2});
  auto [b, bm] = test::clique_layer("B", 10, {2});
  lonely.communities.emplace("A", make_layer_communities(a, am, 0.8));
  lonely.communities.emplace("B", make_layer_communities(b, bm, 0.8));
  lonely.mln.add_layer(a);
  lonely.mln.add_layer(b);
  lonely.mln.add_interlayer({"A", "B", {}});
  auto r = run(lonely, "A # B");
  CHECK(r.tuples.empty());
  CHECK(classify(r).first.empty());
  CHECK(classify(r).second.empty());
}

TEST_CASE("ranking keys") {
  auto r = ranked_fixture({{5, 4}, {4, 4}, {3, 4}});
  KTuple big{{1, 1, 1}, {}};    // sizes 5,4,3
  KTuple even{{2, 2, 2}, {}};   // sizes 4,4,4
  KTuple partial{{1, 2, 0}, {}};
  r.tuples = {big, partial, even};
  CHECK(rank(r, RankKey::MinSize) == std::vector<KTuple>{even, big, partial});
  CHECK(rank(r, RankKey::SumSize) == std::vector<KTuple>{big, even, partial});
  // densities are 1/size: min density of big is 1/5, of even 1/4
  CHECK(rank(r, RankKey::MinDensity) == std::vector<KTuple>{even, big, partial});

  KTuple six{{1, 1, 1}, {pairs_of_size(4), pairs_of_size(2)}};
  KTuple five{{2, 2, 2}, {pairs_of_size(5), std::nullopt}};
  r.tuples = {five, six};
  CHECK(rank(r, RankKey::SumRawPairs) == std::vector<KTuple>{six, five});

  // equal keys fall back to the slot sequence
  KTuple t1{{2, 1, 2}, {}}, t2{{1, 2, 2}, {}};
  r.tuples = {t1, t2};
  CHECK(rank(r, RankKey::SumRawPairs) == std::vector<KTuple>{t2, t1});

  CHECK(parse_rank_key("sum_size") == RankKey::SumSize);
  CHECK_THROWS_AS(parse_rank_key("median"), Error);
}

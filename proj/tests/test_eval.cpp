#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace eigloc;
using namespace testsupport;

namespace {

std::set<std::pair<std::string, std::string>> edge_names(const LabeledGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [u, v] : g.edges) {
    const auto a = g.names[u], b = g.names[v];
    out.insert(a < b ? std::pair{a, b} : std::pair{b, a});
  }
  return out;
}

}  // namespace

TEST_CASE("atom evaluates to one labeled vertex") {
  const LabeledGraph g = eval_slick(parse_slick("k 1\n(v 1 a)"));
  CHECK(g.order() == 1);
  CHECK(g.names[0] == "a");
  CHECK(g.labels[0] == 1);
  CHECK(g.edges.empty());
}

TEST_CASE("the worked expression evaluates to the 7-vertex graph") {
  const LabeledGraph g = eval_slick(load_fixture_slick("fig1.slick"));
  CHECK(g.order() == 7);
  const std::set<std::pair<std::string, std::string>> want = {
      {"a", "b"}, {"b", "e"}, {"b", "d"}, {"d", "e"}, {"c", "d"},
      {"f", "g"}, {"a", "g"}, {"b", "g"}, {"d", "g"}, {"c", "g"}};
  CHECK(edge_names(g) == want);
}

TEST_CASE("p4 fixture evaluates to the path") {
  const LabeledGraph g = eval_slick(load_fixture_slick("p4.slick"));
  CHECK(g.order() == 4);
  const std::set<std::pair<std::string, std::string>> want = {{"a", "b"}, {"b", "c"}, {"c", "d"}};
  CHECK(edge_names(g) == want);
}

TEST_CASE("classic evaluation examples") {
  const LabeledGraph two = eval_classic(parse_classic("k 1\n(u (v 1 a) (v 1 b))"));
  CHECK(two.order() == 2);
  CHECK(two.edges.empty());
  CHECK(two.labels == std::vector<int>{1, 1});

  const LabeledGraph joined = eval_classic(parse_classic("k 2\n(eta 1 2 (u (v 1 a) (v 2 b)))"));
  CHECK(joined.edges.size() == 1);
  CHECK(joined.labels == std::vector<int>{1, 2});

  const LabeledGraph renamed = eval_classic(parse_classic("k 2\n(rho 1 2 (eta 1 2 (u (v 1 a) (v 2 b))))"));
  CHECK(renamed.edges.size() == 1);
  CHECK(renamed.labels == std::vector<int>{2, 2});
}

TEST_CASE("eta is idempotent") {
  const auto once = eval_classic(parse_classic("k 2\n(eta 1 2 (u (v 1 a) (v 2 b)))"));
  const auto twice = eval_classic(parse_classic("k 2\n(eta 1 2 (eta 1 2 (u (v 1 a) (v 2 b))))"));
  CHECK(graphs_equal(once, twice));
}

TEST_CASE("graphs_equal compares identity, labels and edges") {
  const SlickExpr e = load_fixture_slick("fig1.slick");
  const LabeledGraph g = eval_slick(e);
  CHECK(graphs_equal(g, eval_slick(e)));

  // hand-built target graph: every label ends up 1 after the root join
  LabeledGraph hand;
  int id = 0;
  std::map<std::string, int> at;
  for (const char* nm : {"g", "f", "e", "c", "d", "a", "b"}) at[nm] = hand.add_vertex(id++, nm, 1);
  for (const auto& [u, v] : std::initializer_list<std::pair<const char*, const char*>>{
           {"a", "b"}, {"b", "e"}, {"b", "d"}, {"e", "d"}, {"d", "c"},
           {"g", "f"}, {"g", "a"}, {"g", "b"}, {"g", "d"}, {"g", "c"}})
    hand.add_edge(at[u], at[v]);
  CHECK(graphs_equal(g, hand));
  LabeledGraph h = g;
  h.labels[0] = 3 - h.labels[0];
  CHECK(!graphs_equal(g, h));
  LabeledGraph x = g;
  x.edges.erase(x.edges.begin());
  CHECK(!graphs_equal(g, x));
}

TEST_CASE("join with empty S is a disjoint union") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SlickExpr e = gen_slick(4 + static_cast<int>(seed % 5), 3, seed);
    const SlickExpr f = gen_slick(3 + static_cast<int>(seed % 4), 3, seed + 1000);
    const LabeledGraph ge = eval_slick(e);
    const LabeledGraph gf = eval_slick(f);
    const int left = e.root;
    // names collide between independent gen outputs; prefix the right side
    SlickExpr fr = f;
    for (auto& nm : fr.vertex_names) nm = "r_" + nm;
    const int right = e.absorb(fr);
    e.root = e.add_join(JoinRelation{}, LabelMap::identity(), LabelMap::identity(), left, right);
    const LabeledGraph gu = eval_slick(e);
    CHECK(gu.edges.size() == ge.edges.size() + gf.edges.size());
  }
}

TEST_CASE("subexpressions evaluate to induced subgraphs") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SlickExpr e = gen_slick(2 + static_cast<int>(seed % 9), 1 + static_cast<int>(seed % 4), seed);
    const LabeledGraph whole = eval_slick(e);
    auto name_edges = edge_names(whole);
    for (int node = 0; node < e.n_nodes(); ++node) {
      const LabeledGraph sub = eval_slick(e, node);
      std::set<std::string> sub_names(sub.names.begin(), sub.names.end());
      // every edge of the subgraph appears in the whole graph, and every
      // whole-graph edge between subgraph vertices appears in the subgraph
      auto sub_edges = edge_names(sub);
      for (const auto& ed : sub_edges) CHECK(name_edges.count(ed) == 1);
      for (const auto& ed : name_edges)
        if (sub_names.count(ed.first) && sub_names.count(ed.second)) CHECK(sub_edges.count(ed) == 1);
    }
  }
}

TEST_CASE("vertex count equals atom count") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const int n = 1 + static_cast<int>(seed % 12);
    CHECK(eval_slick(gen_slick(n, 2, seed)).order() == n);
  }
}

TEST_CASE("degrees and components") {
  const LabeledGraph g = eval_slick(load_fixture_slick("fig1.slick"));
  const auto deg = g.degrees();
  int total = 0;
  for (int d : deg) total += d;
  CHECK(total == 2 * static_cast<int>(g.edges.size()));
  CHECK(g.components() == 1);
  const LabeledGraph two = eval_slick(disjoint_blocks(2, 2, add_k2));
  CHECK(two.components() == 2);
}

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "forcelab/modeltools.hpp"

using namespace forcelab;

namespace {

// The six-node digraph on {1, 2, 2022, w, w*2022, {2022, w*2022}} with true
// membership restricted to the listed nodes.
MembershipDigraph mixed_ordinal_digraph() {
  MembershipDigraph g;
  g.nodes = {"1", "2", "2022", "w", "w*2022", "{2022,w*2022}"};
  auto edge = [&](const std::string& a, const std::string& b) { g.edges.insert({a, b}); };
  edge("1", "2");
  edge("1", "2022");
  edge("2", "2022");
  edge("1", "w");
  edge("2", "w");
  edge("2022", "w");
  edge("1", "w*2022");
  edge("2", "w*2022");
  edge("2022", "w*2022");
  edge("w", "w*2022");
  edge("2022", "{2022,w*2022}");
  edge("w*2022", "{2022,w*2022}");
  return g;
}

MembershipDigraph digraph_of(const std::vector<HFSet>& values) {
  MembershipDigraph g;
  for (const auto& v : values) g.nodes.push_back(v.to_string());
  for (const auto& a : values)
    for (const auto& b : values)
      if (b.contains(a)) g.edges.insert({a.to_string(), b.to_string()});
  return g;
}

}  // namespace

TEST_CASE("extensionality checking") {
  CHECK(check_extensional(mixed_ordinal_digraph()));

  MembershipDigraph two;
  two.nodes = {"a", "b"};
  auto w = extensionality_counterexample(two);
  REQUIRE(w.has_value());  // two isolated nodes share the empty member set

  MembershipDigraph one;
  one.nodes = {"a"};
  CHECK(check_extensional(one));
}

TEST_CASE("collapse of the mixed-ordinal digraph") {
  auto f = mostowski_collapse(mixed_ordinal_digraph());
  CHECK(f.at("1") == von_neumann(0));
  CHECK(f.at("2") == von_neumann(1));
  CHECK(f.at("2022") == von_neumann(2));
  CHECK(f.at("w") == von_neumann(3));
  CHECK(f.at("w*2022") == von_neumann(4));
  CHECK(f.at("{2022,w*2022}") == HFSet::make({von_neumann(2), von_neumann(4)}));

  // the image is transitive
  std::vector<HFSet> image;
  for (const auto& [n, v] : f) image.push_back(v);
  CHECK(is_transitive(image));
}

TEST_CASE("collapse is the identity on transitive HF digraphs") {
  auto tc = transitive_closure(von_neumann(3));
  tc.push_back(von_neumann(3));
  auto f = mostowski_collapse(digraph_of(tc));
  for (const auto& v : tc) CHECK(f.at(v.to_string()) == v);
}

TEST_CASE("collapse of a bare chain") {
  MembershipDigraph g;
  g.nodes = {"a", "b", "c"};
  g.edges = {{"a", "b"}, {"b", "c"}};
  auto f = mostowski_collapse(g);
  CHECK(f.at("a") == HFSet());
  CHECK(f.at("b") == HFSet::make({HFSet()}));
  CHECK(f.at("c") == HFSet::make({HFSet::make({HFSet()})}));
}

TEST_CASE("collapse rejects bad input") {
  MembershipDigraph cyc;
  cyc.nodes = {"a", "b"};
  cyc.edges = {{"a", "b"}, {"b", "a"}};
  CHECK_THROWS_AS(mostowski_collapse(cyc), Error);

  MembershipDigraph nonext;
  nonext.nodes = {"a", "b", "c"};
  nonext.edges = {{"a", "c"}};
  CHECK_THROWS_AS(mostowski_collapse(nonext), Error);
}

TEST_CASE("collapse is a membership isomorphism on random extensional digraphs") {
  std::mt19937 rng(60901);
  auto v4 = v_stage(4);
  int done = 0;
  while (done < 100) {
    std::set<std::size_t> picked;
    std::uniform_int_distribution<std::size_t> pick(0, v4.size() - 1);
    std::uniform_int_distribution<int> count(2, 8);
    int n = count(rng);
    for (int i = 0; i < n; ++i) picked.insert(pick(rng));
    std::vector<HFSet> values;
    for (auto i : picked) values.push_back(v4[i]);
    MembershipDigraph g = digraph_of(values);
    if (!check_extensional(g)) continue;
    auto f = mostowski_collapse(g);

    // injective, edge iff membership of images, image transitive
    std::vector<HFSet> image;
    for (const auto& [node, v] : f) image.push_back(v);
    std::sort(image.begin(), image.end());
    REQUIRE(std::adjacent_find(image.begin(), image.end()) == image.end());
    for (const auto& a : g.nodes)
      for (const auto& b : g.nodes) {
        if (a == b) continue;
        CHECK(g.edges.count({a, b}) == (f.at(b).contains(f.at(a)) ? 1 : 0));
      }
    CHECK(is_transitive(image));
    ++done;
  }
}

TEST_CASE("reflection check recognizes failures") {
  Structure ambient = structure_of(v_stage(3));
  // the comparability claim fails in the ambient but holds among naturals
  FormulaPtr psi = parse_formula("all y . (x in y | y in x | x = y)");
  std::set<std::string> naturals = {von_neumann(0).to_string(), von_neumann(1).to_string(),
                                    von_neumann(2).to_string()};
  Assignment a;
  a.vars["x"] = von_neumann(1).to_string();
  CHECK_FALSE(check_reflection(psi, naturals, ambient, a));

  // bounded formulas always reflect in transitive node sets
  FormulaPtr empty_x = parse_formula("all w in x . ~(w = w)");
  CHECK(check_reflection(empty_x, naturals, ambient, a));

  Assignment bad;
  bad.vars["x"] = HFSet::make({von_neumann(1)}).to_string();
  CHECK_THROWS_AS(check_reflection(psi, naturals, ambient, bad), Error);
}

TEST_CASE("witness closure reaches a reflecting fixed point") {
  Structure ambient = structure_of(v_stage(4));

  SECTION("no witnesses needed") {
    auto report = reflect_closure({parse_formula("x = x")}, ambient,
                                  {von_neumann(1).to_string()});
    CHECK(report.closure == std::set<std::string>{von_neumann(1).to_string()});
    REQUIRE(report.reflected.size() == 1);
    CHECK(report.reflected[0]);
  }

  SECTION("a member witness appears per nonempty seed element") {
    auto report = reflect_closure({parse_formula("ex y . y in x")}, ambient,
                                  {von_neumann(2).to_string()});
    CHECK(report.closure.count(HFSet().to_string()) == 1);  // the least-rank member
    REQUIRE(report.reflected.size() == 1);
    CHECK(report.reflected[0]);
  }

  SECTION("empty-set sentence reflects from an empty seed") {
    FormulaPtr f = parse_formula("ex y . all z . ~(z in y)");
    auto report = reflect_closure({f}, ambient, {});
    REQUIRE(report.reflected.size() == 1);
    CHECK(report.reflected[0]);
    Assignment none;
    CHECK(evaluate(f, ambient, none));
  }

  SECTION("five-formula closure reflects everything and is a fixed point") {
    std::vector<FormulaPtr> formulas = {
        parse_formula("ex y . all z . ~(z in y)"),
        parse_formula("all u . ex v . u in v"),
        parse_formula("ex z . (x in z & y in z)"),
        parse_formula("all w in x . w in y"),
        parse_formula("ex y . all w . (w in y <-> w in x)"),
    };
    auto report =
        reflect_closure(formulas, ambient, {von_neumann(1).to_string(), von_neumann(2).to_string()});
    REQUIRE(report.reflected.size() == formulas.size());
    for (std::size_t i = 0; i < formulas.size(); ++i) CHECK(report.reflected[i]);

    // re-closure adds no nodes
    auto again = reflect_closure(formulas, ambient, report.closure);
    CHECK(again.closure == report.closure);

    // the closure collapses (it is extensional by construction)
    CHECK_FALSE(report.collapse_map.empty());
  }
}

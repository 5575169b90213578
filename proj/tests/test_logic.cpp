#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "forcelab/logic.hpp"

using namespace forcelab;

namespace {

const std::vector<std::string> kVars = {"x", "y", "z"};

FormulaPtr random_formula(std::mt19937& rng, int depth, bool delta0_only = false) {
  std::uniform_int_distribution<int> var(0, int(kVars.size()) - 1);
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 1);
  auto v = [&] { return kVars[std::size_t(var(rng))]; };
  switch (pick(rng)) {
    case 0:
      return Formula::member(v(), v());
    case 1:
      return Formula::equal(v(), v());
    case 2:
      return Formula::not_(random_formula(rng, depth - 1, delta0_only));
    case 3:
      return Formula::and_(random_formula(rng, depth - 1, delta0_only),
                           random_formula(rng, depth - 1, delta0_only));
    case 4:
      return Formula::or_(random_formula(rng, depth - 1, delta0_only),
                          random_formula(rng, depth - 1, delta0_only));
    case 5:
      return Formula::implies(random_formula(rng, depth - 1, delta0_only),
                              random_formula(rng, depth - 1, delta0_only));
    case 6:
      return Formula::iff(random_formula(rng, depth - 1, delta0_only),
                          random_formula(rng, depth - 1, delta0_only));
    default: {
      std::string qv = v();
      std::string bound = v();
      bool bounded = delta0_only || bound != qv;
      FormulaPtr body = random_formula(rng, depth - 1, delta0_only);
      if (pick(rng) % 2) {
        if (bounded && bound != qv) return Formula::forall_in(qv, bound, body);
        return delta0_only ? body : Formula::forall(qv, body);
      }
      if (bounded && bound != qv) return Formula::exists_in(qv, bound, body);
      return delta0_only ? body : Formula::exists(qv, body);
    }
  }
}

Structure ambient_v(unsigned n) { return structure_of(v_stage(n)); }

std::string node_of(const HFSet& x) { return x.to_string(); }

// All assignments of the given variables into the node list.
std::vector<Assignment> all_assignments(const std::vector<std::string>& vars,
                                        const std::vector<std::string>& nodes) {
  std::vector<Assignment> out;
  if (vars.empty()) return {Assignment{}};
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a.vars[vars[i]] = nodes[idx[i]];
    out.push_back(a);
    std::size_t k = 0;
    for (; k < idx.size(); ++k) {
      if (++idx[k] < nodes.size()) break;
      idx[k] = 0;
    }
    if (k == idx.size()) return out;
  }
}

}  // namespace

TEST_CASE("parsing the published grammar") {
  FormulaPtr f = parse_formula("all x . x = x");
  REQUIRE(f->kind == FormulaKind::ForAll);
  CHECK(f->var == "x");
  CHECK(f->left->kind == FormulaKind::Equal);

  // hand-parsed nested shape
  FormulaPtr g = parse_formula("all x . (x = e -> ~(ex y . y in x))");
  FormulaPtr expected = Formula::forall(
      "x", Formula::implies(Formula::equal("x", "e"),
                            Formula::not_(Formula::exists("y", Formula::member("y", "x")))));
  CHECK(formula_eq(g, expected));

  FormulaPtr h = parse_formula("all x in y . x in z");
  REQUIRE(h->kind == FormulaKind::ForAll);
  CHECK(h->bound == "y");
  CHECK(formula_eq(h->left, Formula::member("x", "z")));

  CHECK_THROWS_AS(parse_formula("all . x = x"), ParseError);
  CHECK_THROWS_AS(parse_formula("x ="), ParseError);
  CHECK_THROWS_AS(parse_formula("x = y zzz"), ParseError);
}

TEST_CASE("rendering") {
  CHECK(render_formula(Formula::equal("x", "x")) == "x = x");
  CHECK(render_formula(Formula::not_(Formula::member("x", "y"))) == "~(x in y)");
  CHECK(render_formula(Formula::forall_in("x", "y", Formula::member("x", "z"))) ==
        "all x in y . x in z");
  // precedence: implication chains right, conjunction left
  CHECK(render_formula(parse_formula("a = a -> b = b -> c = c")) == "a = a -> b = b -> c = c");
  CHECK(render_formula(parse_formula("(a = a -> b = b) -> c = c")) == "(a = a -> b = b) -> c = c");
}

TEST_CASE("parse-render round trip on random formulas") {
  std::mt19937 rng(31337);
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = random_formula(rng, 4);
    CHECK(formula_eq(parse_formula(render_formula(f)), f));
  }
}

TEST_CASE("desugaring shapes") {
  FormulaPtr a = Formula::member("x", "y"), b = Formula::equal("x", "y");
  CHECK(formula_eq(desugar(Formula::or_(a, b)),
                   Formula::not_(Formula::and_(Formula::not_(a), Formula::not_(b)))));
  CHECK(formula_eq(desugar(Formula::exists("x", a)),
                   Formula::not_(Formula::forall("x", Formula::not_(a)))));
  FormulaPtr bounded = Formula::forall_in("x", "y", Formula::member("x", "z"));
  FormulaPtr core = desugar(bounded);
  REQUIRE(core->kind == FormulaKind::ForAll);
  CHECK(core->bound.empty());
}

TEST_CASE("desugaring preserves truth on every structure") {
  std::mt19937 rng(4242);
  Structure s = ambient_v(3);
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = random_formula(rng, 3);
    std::vector<std::string> fv(free_vars(f).begin(), free_vars(f).end());
    std::uniform_int_distribution<std::size_t> node(0, s.nodes.size() - 1);
    Assignment a;
    for (const auto& v : fv) a.vars[v] = s.nodes[node(rng)];
    CHECK(evaluate(f, s, a) == evaluate(desugar(f), s, a));
  }
}

TEST_CASE("free variables") {
  CHECK(free_vars(Formula::equal("x", "y")) == std::set<std::string>{"x", "y"});
  CHECK(free_vars(Formula::forall("x", Formula::member("x", "y"))) == std::set<std::string>{"y"});
  CHECK(free_vars(Formula::forall_in("x", "y", Formula::member("x", "z"))) ==
        std::set<std::string>{"y", "z"});
}

TEST_CASE("renaming") {
  FormulaPtr f = Formula::equal("x", "y");
  CHECK(formula_eq(rename(f, {{"x", "a"}, {"y", "b"}}), Formula::equal("a", "b")));
  CHECK(formula_eq(rename(f, {}), f));
  // collapsing two variables is the disaster case and is rejected
  FormulaPtr g = parse_formula("x in y -> ex z . (x in z & z in y)");
  CHECK_THROWS_AS(rename(g, {{"x", "a"}, {"y", "b"}, {"z", "b"}}), Error);
  // free/bound structure preserved
  FormulaPtr h = rename(g, {{"x", "a"}, {"y", "b"}, {"z", "c"}});
  CHECK(free_vars(h) == std::set<std::string>{"a", "b"});
}

TEST_CASE("quantifier complexity") {
  CHECK(classify(parse_formula("all y in x . ~(y = y)")) == Complexity::Delta0);
  CHECK(classify(parse_formula("ex f . all y in f . y in x")) == Complexity::Sigma1);
  CHECK(classify(parse_formula("all a . ex b . a in b")) == Complexity::Higher);
  CHECK(classify(parse_formula("all f . all y in f . y in x")) == Complexity::Pi1);
  CHECK(classify(parse_formula("x = y")) == Complexity::Delta0);
}

TEST_CASE("relativization syntax") {
  FormulaPtr atom = Formula::member("x", "y");
  CHECK(formula_eq(relativize(atom, "M"), atom));
  FormulaPtr f = parse_formula("all x . ex y . x in y");
  FormulaPtr rel = relativize(f, "M");
  REQUIRE(rel->kind == FormulaKind::ForAll);
  CHECK(rel->bound == "M");
  CHECK(rel->left->bound == "M");
  CHECK_THROWS_AS(relativize(parse_formula("all x . x in M"), "M"), Error);
}

TEST_CASE("relativization changes truth exactly as expected") {
  // ambient: 0, 1, 2 with true membership
  Structure s = structure_of({von_neumann(0), von_neumann(1), von_neumann(2)});
  std::string n0 = node_of(von_neumann(0));
  std::string n1 = node_of(von_neumann(1));

  // "everything is empty" is false, but true relative to {0}
  FormulaPtr f1 = parse_formula("all x . x = e");
  Assignment base;
  base.vars["e"] = n0;
  CHECK_FALSE(evaluate(f1, s, base));
  Assignment tagged = base;
  tagged.tags["M"] = {n0};
  CHECK(evaluate(relativize(f1, "M"), s, tagged));

  // "everything is empty or has a member" is true, false relative to {1}
  FormulaPtr f2 = parse_formula("all x . (x = e | ex y . y in x)");
  CHECK(evaluate(f2, s, base));
  Assignment tagged2 = base;
  tagged2.tags["M"] = {n1};
  CHECK_FALSE(evaluate(relativize(f2, "M"), s, tagged2));

  // "everything is empty or a successor" is false in a V stage, but true
  // relative to the von Neumann naturals it contains
  Structure v3 = ambient_v(3);
  FormulaPtr f3 = parse_formula("all x . (x = e | ex y . (all w . (w in x <-> (w in y | w = y))))");
  Assignment base3;
  base3.vars["e"] = node_of(HFSet());
  CHECK_FALSE(evaluate(f3, v3, base3));
  Assignment tagged3 = base3;
  tagged3.tags["M"] = {node_of(von_neumann(0)), node_of(von_neumann(1)), node_of(von_neumann(2))};
  CHECK(evaluate(relativize(f3, "M"), v3, tagged3));
}

TEST_CASE("evaluation basics") {
  Structure s = structure_of({von_neumann(0), von_neumann(1), von_neumann(2)});
  FormulaPtr empty_x = parse_formula("all w in x . ~(w = w)");

  // Empty(1) flips between the ambient and the non-transitive {1, 2}
  Assignment a;
  a.vars["x"] = node_of(von_neumann(1));
  CHECK_FALSE(evaluate(empty_x, s, a));
  Structure m = substructure(s, {node_of(von_neumann(1)), node_of(von_neumann(2))});
  CHECK(evaluate(empty_x, m, a));

  CHECK(evaluate(parse_formula("x = x"), s, a));
  CHECK_THROWS_AS(evaluate(parse_formula("x in q"), s, a), Error);

  // ordinal check at 3 inside V_4: transitive and totally ordered by membership
  Structure v4 = ambient_v(4);
  FormulaPtr ord = parse_formula(
      "(all y in x . all z in y . z in x) & (all y in x . all z in x . (z in y | y in z | z = y))");
  Assignment a3;
  a3.vars["x"] = node_of(von_neumann(3));
  CHECK(evaluate(ord, v4, a3));
  Assignment abad;
  abad.vars["x"] = node_of(HFSet::make({von_neumann(1)}));  // {1} is not transitive
  CHECK_FALSE(evaluate(ord, v4, abad));
}

TEST_CASE("bounded formulas transfer between transitive structures") {
  std::mt19937 rng(2718);
  Structure ambient = ambient_v(4);
  auto v4 = v_stage(4);
  int done = 0;
  while (done < 200) {
    // random transitive substructure: close a random subset under members
    std::set<std::string> keep;
    std::uniform_int_distribution<int> coin(0, 3);
    for (const auto& x : v4)
      if (coin(rng) == 0) {
        keep.insert(node_of(x));
        for (const auto& y : transitive_closure(x)) keep.insert(node_of(y));
      }
    if (keep.empty()) continue;
    Structure m = substructure(ambient, keep);
    FormulaPtr f = random_formula(rng, 3, /*delta0_only=*/true);
    if (!is_delta0(f)) continue;
    std::vector<std::string> fv(free_vars(f).begin(), free_vars(f).end());
    std::vector<std::string> pool(keep.begin(), keep.end());
    std::uniform_int_distribution<std::size_t> node(0, pool.size() - 1);
    Assignment a;
    for (const auto& v : fv) a.vars[v] = pool[node(rng)];
    REQUIRE(evaluate(f, m, a) == evaluate(f, ambient, a));
    ++done;
  }
}

TEST_CASE("one-way transfer for unbounded prefixes") {
  std::mt19937 rng(1618);
  Structure ambient = ambient_v(3);
  auto v3 = v_stage(3);
  for (int i = 0; i < 200; ++i) {
    std::set<std::string> keep;
    std::uniform_int_distribution<int> coin(0, 2);
    for (const auto& x : v3)
      if (coin(rng) == 0) keep.insert(node_of(x));
    if (keep.empty()) continue;

    FormulaPtr body = random_formula(rng, 2, /*delta0_only=*/true);
    FormulaPtr sigma = Formula::exists("x", body);
    FormulaPtr pi = Formula::forall("x", body);
    std::vector<std::string> pool(keep.begin(), keep.end());
    std::uniform_int_distribution<std::size_t> node(0, pool.size() - 1);
    Assignment a;
    for (const auto& v : free_vars(sigma)) a.vars[v] = pool[node(rng)];
    Assignment tagged = a;
    tagged.tags["M"] = keep;

    // Sigma_1 goes up, Pi_1 comes down
    if (evaluate(relativize(sigma, "M"), ambient, tagged)) CHECK(evaluate(sigma, ambient, a));
    if (evaluate(pi, ambient, a)) CHECK(evaluate(relativize(pi, "M"), ambient, tagged));
  }
}

TEST_CASE("relativized evaluation agrees with substructure evaluation") {
  std::mt19937 rng(5555);
  Structure ambient = ambient_v(3);
  auto v3 = v_stage(3);
  for (int i = 0; i < 200; ++i) {
    std::set<std::string> keep;
    std::uniform_int_distribution<int> coin(0, 2);
    for (const auto& x : v3)
      if (coin(rng) == 0) {
        keep.insert(node_of(x));
        for (const auto& y : transitive_closure(x)) keep.insert(node_of(y));
      }
    if (keep.empty()) continue;
    FormulaPtr f = random_formula(rng, 3);
    std::vector<std::string> pool(keep.begin(), keep.end());
    std::uniform_int_distribution<std::size_t> node(0, pool.size() - 1);
    Assignment a;
    for (const auto& v : free_vars(f)) a.vars[v] = pool[node(rng)];
    Assignment tagged = a;
    tagged.tags["M"] = keep;
    CHECK(evaluate(relativize(f, "M"), ambient, tagged) == evaluate(f, substructure(ambient, keep), a));
  }
}

TEST_CASE("structure validation") {
  Structure s;
  s.nodes = {"a", "b"};
  s.edges = {{"a", "b"}};
  s.validate();
  s.edges.insert({"a", "a"});
  CHECK_THROWS_AS(s.validate(), Error);  // no self-membership
  Structure t;
  t.nodes = {"a"};
  t.edges = {{"a", "b"}};
  CHECK_THROWS_AS(t.validate(), Error);
}

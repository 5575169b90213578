#pragma once

// Hilbert-style proof checking for the membership language: five logical
// axiom schemas, two equality axioms, the ZFC axiom list with the
// comprehension and replacement schemas, modus ponens, generalization and
// variable renaming. Formulas are matched on a {implies, not, forall} core
// (with membership/equality atoms); the other connectives are notation.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"
#include "forcelab/logic.hpp"

namespace forcelab {

// ---------------------------------------------------------------------------
// The proof core: and/or/iff/exists and bounded quantifiers unfold into
// implication, negation and the universal quantifier.

inline FormulaPtr proof_core(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      return f;
    case FormulaKind::Not:
      return Formula::not_(proof_core(f->left));
    case FormulaKind::Implies:
      return Formula::implies(proof_core(f->left), proof_core(f->right));
    case FormulaKind::And:  // a & b  =  ~(a -> ~b)
      return Formula::not_(Formula::implies(proof_core(f->left), Formula::not_(proof_core(f->right))));
    case FormulaKind::Or:  // a | b  =  ~a -> b
      return Formula::implies(Formula::not_(proof_core(f->left)), proof_core(f->right));
    case FormulaKind::Iff: {  // a <-> b  =  (a -> b) & (b -> a)
      FormulaPtr a = proof_core(f->left), b = proof_core(f->right);
      return Formula::not_(Formula::implies(Formula::implies(a, b),
                                            Formula::not_(Formula::implies(b, a))));
    }
    case FormulaKind::ForAll: {
      FormulaPtr body = proof_core(f->left);
      if (!f->bound.empty())
        body = Formula::implies(Formula::member(f->var, f->bound), body);
      return Formula::forall(f->var, body);
    }
    case FormulaKind::Exists: {  // ex x . b  =  ~ all x . ~b
      FormulaPtr body = proof_core(f->left);
      if (!f->bound.empty())
        body = Formula::not_(Formula::implies(Formula::member(f->var, f->bound), Formula::not_(body)));
      return Formula::not_(Formula::forall(f->var, Formula::not_(body)));
    }
  }
  throw Error("proof_core: unreachable");
}

// Substitute free occurrences of a variable; the replacement must be fresh.
inline FormulaPtr subst_var(const FormulaPtr& f, const std::string& from, const std::string& to) {
  if (from != to && all_vars(f).count(to))
    throw Error("subst_var: replacement '" + to + "' already occurs");
  struct Walker {
    const std::string& from;
    const std::string& to;
    FormulaPtr walk(const FormulaPtr& g) {
      auto ap = [this](const std::string& v) { return v == from ? to : v; };
      switch (g->kind) {
        case FormulaKind::Member:
          return Formula::member(ap(g->lhs), ap(g->rhs));
        case FormulaKind::Equal:
          return Formula::equal(ap(g->lhs), ap(g->rhs));
        case FormulaKind::Not:
          return Formula::not_(walk(g->left));
        case FormulaKind::And:
          return Formula::and_(walk(g->left), walk(g->right));
        case FormulaKind::Or:
          return Formula::or_(walk(g->left), walk(g->right));
        case FormulaKind::Implies:
          return Formula::implies(walk(g->left), walk(g->right));
        case FormulaKind::Iff:
          return Formula::iff(walk(g->left), walk(g->right));
        case FormulaKind::ForAll:
        case FormulaKind::Exists: {
          std::string b = g->bound.empty() ? "" : ap(g->bound);
          if (g->var == from) {  // shadowed below this binder
            FormulaPtr body = g->left;
            if (g->kind == FormulaKind::ForAll)
              return b.empty() ? Formula::forall(g->var, body) : Formula::forall_in(g->var, b, body);
            return b.empty() ? Formula::exists(g->var, body) : Formula::exists_in(g->var, b, body);
          }
          FormulaPtr body = walk(g->left);
          if (g->kind == FormulaKind::ForAll)
            return b.empty() ? Formula::forall(g->var, body) : Formula::forall_in(g->var, b, body);
          return b.empty() ? Formula::exists(g->var, body) : Formula::exists_in(g->var, b, body);
        }
      }
      throw Error("subst_var: unreachable");
    }
  } w{from, to};
  return w.walk(f);
}

// Bound variables renamed to a canonical sequence; two alpha-variant
// sentences canonicalize identically.
inline FormulaPtr alpha_canonical(const FormulaPtr& f) {
  struct Walker {
    std::size_t next = 0;
    std::map<std::string, std::vector<std::string>> stack;  // var -> canonical names
    std::string look(const std::string& v) {
      auto it = stack.find(v);
      if (it == stack.end() || it->second.empty()) return v;
      return it->second.back();
    }
    FormulaPtr walk(const FormulaPtr& g) {
      switch (g->kind) {
        case FormulaKind::Member:
          return Formula::member(look(g->lhs), look(g->rhs));
        case FormulaKind::Equal:
          return Formula::equal(look(g->lhs), look(g->rhs));
        case FormulaKind::Not:
          return Formula::not_(walk(g->left));
        case FormulaKind::And:
          return Formula::and_(walk(g->left), walk(g->right));
        case FormulaKind::Or:
          return Formula::or_(walk(g->left), walk(g->right));
        case FormulaKind::Implies:
          return Formula::implies(walk(g->left), walk(g->right));
        case FormulaKind::Iff:
          return Formula::iff(walk(g->left), walk(g->right));
        case FormulaKind::ForAll:
        case FormulaKind::Exists: {
          std::string b = g->bound.empty() ? "" : look(g->bound);
          std::string fresh = "#" + std::to_string(next++);
          stack[g->var].push_back(fresh);
          FormulaPtr body = walk(g->left);
          stack[g->var].pop_back();
          if (g->kind == FormulaKind::ForAll)
            return b.empty() ? Formula::forall(fresh, body) : Formula::forall_in(fresh, b, body);
          return b.empty() ? Formula::exists(fresh, body) : Formula::exists_in(fresh, b, body);
        }
      }
      throw Error("alpha_canonical: unreachable");
    }
  } w;
  return w.walk(f);
}

inline bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  return formula_eq(alpha_canonical(proof_core(a)), alpha_canonical(proof_core(b)));
}

// ---------------------------------------------------------------------------
// Logical axiom schema matching (on the proof core).

namespace detail {

// A[x := t] structural match: walks A and C in parallel, collecting the
// unique variable substituted for free occurrences of x. Empty result means
// x never occurred free (so C must equal A).
inline bool match_subst(const FormulaPtr& a, const FormulaPtr& c, const std::string& x,
                        bool shadowed, std::string& t) {
  if (a->kind != c->kind) return false;
  auto check_var = [&](const std::string& va, const std::string& vc) {
    if (!shadowed && va == x) {
      if (t.empty()) t = vc;
      return t == vc;
    }
    return va == vc;
  };
  switch (a->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      return check_var(a->lhs, c->lhs) && check_var(a->rhs, c->rhs);
    case FormulaKind::Not:
      return match_subst(a->left, c->left, x, shadowed, t);
    case FormulaKind::Implies:
      return match_subst(a->left, c->left, x, shadowed, t) &&
             match_subst(a->right, c->right, x, shadowed, t);
    case FormulaKind::ForAll:
      if (a->var != c->var) return false;
      return match_subst(a->left, c->left, x, shadowed || a->var == x, t);
    default:
      return false;  // proof core only
  }
}

}  // namespace detail

// Which of the five footnote axioms does this core formula instantiate?
inline std::optional<int> match_logical_axiom(const FormulaPtr& f) {
  const FormulaPtr& g = f;
  auto imp = [](const FormulaPtr& x) { return x->kind == FormulaKind::Implies; };
  auto neg = [](const FormulaPtr& x) { return x->kind == FormulaKind::Not; };
  // 1:  A -> (B -> A)
  if (imp(g) && imp(g->right) && formula_eq(g->left, g->right->right)) return 1;
  // 2:  (A -> (B -> C)) -> ((A -> B) -> (A -> C))
  if (imp(g) && imp(g->left) && imp(g->left->right) && imp(g->right) && imp(g->right->left) &&
      imp(g->right->right)) {
    const FormulaPtr& a = g->left->left;
    const FormulaPtr& b = g->left->right->left;
    const FormulaPtr& c = g->left->right->right;
    if (formula_eq(g->right->left->left, a) && formula_eq(g->right->left->right, b) &&
        formula_eq(g->right->right->left, a) && formula_eq(g->right->right->right, c))
      return 2;
  }
  // 3:  (~A -> ~B) -> (B -> A)
  if (imp(g) && imp(g->left) && neg(g->left->left) && neg(g->left->right) && imp(g->right)) {
    if (formula_eq(g->left->left->left, g->right->right) &&
        formula_eq(g->left->right->left, g->right->left))
      return 3;
  }
  // 4:  (all x . (A -> B)) -> (A -> all x . B), x not free in A
  if (imp(g) && g->left->kind == FormulaKind::ForAll && imp(g->left->left) && imp(g->right) &&
      g->right->right->kind == FormulaKind::ForAll) {
    const std::string& x = g->left->var;
    if (g->right->right->var == x && formula_eq(g->left->left->left, g->right->left) &&
        formula_eq(g->left->left->right, g->right->right->left) && !free_vars(g->right->left).count(x))
      return 4;
  }
  // 5:  (all x . A) -> A[x := t], t sharing no variable with A
  if (imp(g) && g->left->kind == FormulaKind::ForAll) {
    const std::string& x = g->left->var;
    std::string t;
    if (detail::match_subst(g->left->left, g->right, x, false, t)) {
      if (t.empty()) return 5;  // x not free: instance with any fresh term
      if (!all_vars(g->left->left).count(t)) return 5;
    }
  }
  return std::nullopt;
}

inline std::optional<int> match_equality_axiom(const FormulaPtr& f) {
  auto imp = [](const FormulaPtr& x) { return x->kind == FormulaKind::Implies; };
  if (!(imp(f) && f->left->kind == FormulaKind::Equal && imp(f->right) &&
        f->right->left->kind == FormulaKind::Member && f->right->right->kind == FormulaKind::Member))
    return std::nullopt;
  const std::string& a = f->left->lhs;
  const std::string& b = f->left->rhs;
  const FormulaPtr& m1 = f->right->left;
  const FormulaPtr& m2 = f->right->right;
  // 1:  a = b -> (a in c -> b in c)
  if (m1->lhs == a && m2->lhs == b && m1->rhs == m2->rhs) return 1;
  // 2:  a = b -> (c in a -> c in b)
  if (m1->rhs == a && m2->rhs == b && m1->lhs == m2->lhs) return 2;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// The ZFC axioms.

enum class SchemaKind { Comprehension, Replacement };

struct SchemaRoles {
  std::string source;                // the set comprehended over / the domain
  std::string element = "x";         // the comprehension variable
  std::string target = "z";          // the asserted set
  std::string image = "y";           // replacement image variable
  std::string unique_helper = "u";   // replacement uniqueness helper
  std::vector<std::string> params;   // extra universally quantified parameters
};

// The full axiom instance for a formula phi, in surface syntax.
inline FormulaPtr instantiate_schema(SchemaKind kind, const FormulaPtr& phi, const SchemaRoles& roles) {
  using F = Formula;
  std::set<std::string> phi_free = free_vars(phi);
  if (kind == SchemaKind::Comprehension) {
    const std::string& y = roles.source;
    const std::string& x = roles.element;
    const std::string& z = roles.target;
    if (phi_free.count(z) || all_vars(phi).count(z))
      throw Error("instantiate_schema: phi mentions the comprehension target variable");
    if (z == x || z == y) throw Error("instantiate_schema: role variables must be distinct");
    FormulaPtr body = F::iff(F::member(x, z), F::and_(F::member(x, y), phi));
    FormulaPtr inst = F::forall(x, body);
    inst = F::exists(z, inst);
    for (auto it = roles.params.rbegin(); it != roles.params.rend(); ++it)
      inst = F::forall(*it, inst);
    return F::forall(y, inst);
  }
  // Replacement: all A . ((all x in A . ex! y . phi) -> ex B . all x in A . ex y in B . phi)
  const std::string& a = roles.source;
  const std::string& x = roles.element;
  const std::string& y = roles.image;
  const std::string& b = roles.target;
  const std::string& u = roles.unique_helper;
  if (all_vars(phi).count(b)) throw Error("instantiate_schema: phi mentions the image set variable");
  if (all_vars(phi).count(u)) throw Error("instantiate_schema: phi mentions the uniqueness helper");
  FormulaPtr unique = F::exists(
      y, F::and_(phi, F::forall(u, F::implies(subst_var(phi, y, u), F::equal(u, y)))));
  FormulaPtr premise = F::forall_in(x, a, unique);
  FormulaPtr conclusion = F::exists(b, F::forall_in(x, a, F::exists_in(y, b, phi)));
  return F::forall(a, F::implies(premise, conclusion));
}

struct ZfcMatch {
  std::string name;                      // axiom name or schema name
  std::optional<SchemaKind> schema;      // set for schema instances
  FormulaPtr phi;                        // the witnessing formula for schemas
};

// The seven individual axioms, in surface syntax.
inline const std::vector<std::pair<std::string, FormulaPtr>>& zfc_axiom_list() {
  static const std::vector<std::pair<std::string, FormulaPtr>> axioms = [] {
    using F = Formula;
    std::vector<std::pair<std::string, FormulaPtr>> out;
    out.emplace_back("Extensionality",
                     parse_formula("all x . all y . ((all z . (z in x <-> z in y)) <-> x = y)"));
    out.emplace_back("Pairing", parse_formula("all x . all y . ex z . (x in z & y in z)"));
    out.emplace_back("Union",
                     parse_formula("all x . ex u . all y . (y in u <-> (ex z . (y in z & z in x)))"));
    out.emplace_back("Power",
                     parse_formula("all x . ex y . all z . ((all w . (w in z -> w in x)) <-> z in y)"));
    out.emplace_back(
        "Infinity",
        parse_formula("ex x . ((ex e . ((all y . ~(y in e)) & e in x)) & (all z in x . ex s . (s in x "
                      "& (all q . (q in s <-> (q in z | q = z))))))"));
    out.emplace_back(
        "Foundation",
        parse_formula("all x . ((ex y . y in x) -> (ex y . (y in x & ~(ex z . (z in y & z in x)))))"));
    // Choice, with functions unrolled to Kuratowski pairs.
    {
      auto pair_eq = [](const std::string& p, const std::string& a, const std::string& b) {
        return F::forall(
            "q", F::iff(F::member("q", p),
                        F::or_(F::forall("r", F::iff(F::member("r", "q"), F::equal("r", a))),
                               F::forall("r", F::iff(F::member("r", "q"),
                                                     F::or_(F::equal("r", a), F::equal("r", b)))))));
      };
      auto maps_to = [&](const std::string& f, const std::string& a, const std::string& b) {
        return F::exists("p", F::and_(F::member("p", f), pair_eq("p", a, b)));
      };
      FormulaPtr is_fun = F::and_(
          F::forall("p", F::implies(F::member("p", "f"),
                                    F::exists("a", F::exists("b", pair_eq("p", "a", "b"))))),
          F::forall("a", F::forall("b", F::forall("c", F::implies(F::and_(maps_to("f", "a", "b"),
                                                                          maps_to("f", "a", "c")),
                                                                  F::equal("b", "c"))))));
      FormulaPtr dom_is_x =
          F::forall("a", F::iff(F::exists("b", maps_to("f", "a", "b")), F::member("a", "x")));
      FormulaPtr ran_is_union = F::forall(
          "b", F::iff(F::exists("a", maps_to("f", "a", "b")),
                      F::exists("y", F::and_(F::member("y", "x"), F::member("b", "y")))));
      FormulaPtr picks = F::forall_in(
          "y", "x", F::exists("b", F::and_(maps_to("f", "y", "b"), F::member("b", "y"))));
      FormulaPtr empty_not_in_x = F::not_(
          F::exists("e", F::and_(F::member("e", "x"), F::forall("w", F::not_(F::member("w", "e"))))));
      out.emplace_back("Choice",
                       F::forall("x", F::implies(empty_not_in_x,
                                                 F::exists("f", F::and_(F::and_(is_fun, dom_is_x),
                                                                        F::and_(ran_is_union, picks))))));
    }
    return out;
  }();
  return axioms;
}

namespace detail {

// Extract the witnessing formula from a core-form Comprehension instance:
//   all y . all w... . ~ all z . ~ all x . Iff(x in z, And(x in y, phi))
// with Iff and And in their core encodings. Returns the rebuilt roles.
inline std::optional<std::pair<FormulaPtr, SchemaRoles>> extract_comprehension(const FormulaPtr& core) {
  std::vector<std::string> leading;
  FormulaPtr g = core;
  while (g->kind == FormulaKind::ForAll && g->bound.empty()) {
    leading.push_back(g->var);
    g = g->left;
  }
  if (leading.empty()) return std::nullopt;
  if (g->kind != FormulaKind::Not || g->left->kind != FormulaKind::ForAll) return std::nullopt;
  std::string z = g->left->var;
  g = g->left->left;
  if (g->kind != FormulaKind::Not || g->left->kind != FormulaKind::ForAll) return std::nullopt;
  std::string x = g->left->var;
  FormulaPtr body = g->left->left;
  // body = ~((P -> Q) -> ~(Q -> P)) with P = x in z, Q = ~(x in y -> ~phi)
  if (body->kind != FormulaKind::Not || body->left->kind != FormulaKind::Implies) return std::nullopt;
  FormulaPtr pq = body->left->left;
  FormulaPtr qp_neg = body->left->right;
  if (pq->kind != FormulaKind::Implies || qp_neg->kind != FormulaKind::Not ||
      qp_neg->left->kind != FormulaKind::Implies)
    return std::nullopt;
  FormulaPtr p = pq->left;
  FormulaPtr q = pq->right;
  if (!formula_eq(qp_neg->left->left, q) || !formula_eq(qp_neg->left->right, p)) return std::nullopt;
  if (p->kind != FormulaKind::Member || p->lhs != x || p->rhs != z) return std::nullopt;
  if (q->kind != FormulaKind::Not || q->left->kind != FormulaKind::Implies) return std::nullopt;
  FormulaPtr guard = q->left->left;
  FormulaPtr phi_neg = q->left->right;
  if (guard->kind != FormulaKind::Member || guard->lhs != x) return std::nullopt;
  std::string y = guard->rhs;
  if (phi_neg->kind != FormulaKind::Not) return std::nullopt;
  FormulaPtr phi = phi_neg->left;
  // the first leading quantifier is the source set; the rest are parameters
  if (leading.front() != y) return std::nullopt;
  SchemaRoles roles;
  roles.source = y;
  roles.element = x;
  roles.target = z;
  roles.params.assign(leading.begin() + 1, leading.end());
  if (free_vars(phi).count(z)) return std::nullopt;
  return std::make_pair(phi, roles);
}

// Extract phi and roles from a core-form Replacement instance by reading the
// conclusion   ~ all B . ~ all x . (x in A -> ~ all y . ~ ~(y in B -> ~phi)).
inline std::optional<std::pair<FormulaPtr, SchemaRoles>> extract_replacement(const FormulaPtr& core) {
  if (core->kind != FormulaKind::ForAll) return std::nullopt;
  std::string a = core->var;
  FormulaPtr g = core->left;
  if (g->kind != FormulaKind::Implies) return std::nullopt;
  FormulaPtr conc = g->right;
  if (conc->kind != FormulaKind::Not || conc->left->kind != FormulaKind::ForAll) return std::nullopt;
  std::string b = conc->left->var;
  FormulaPtr h = conc->left->left;
  if (h->kind != FormulaKind::Not || h->left->kind != FormulaKind::ForAll) return std::nullopt;
  std::string x = h->left->var;
  FormulaPtr guard_imp = h->left->left;
  if (guard_imp->kind != FormulaKind::Implies || guard_imp->left->kind != FormulaKind::Member ||
      guard_imp->left->lhs != x || guard_imp->left->rhs != a)
    return std::nullopt;
  FormulaPtr ex_part = guard_imp->right;
  if (ex_part->kind != FormulaKind::Not || ex_part->left->kind != FormulaKind::ForAll)
    return std::nullopt;
  std::string y = ex_part->left->var;
  FormulaPtr inner = ex_part->left->left;
  // inner = ~ ~(y in B -> ~phi)   (the core of ~(y in B & phi))
  if (inner->kind != FormulaKind::Not || inner->left->kind != FormulaKind::Not ||
      inner->left->left->kind != FormulaKind::Implies)
    return std::nullopt;
  FormulaPtr guard2 = inner->left->left->left;
  FormulaPtr phi_neg = inner->left->left->right;
  if (guard2->kind != FormulaKind::Member || guard2->lhs != y || guard2->rhs != b)
    return std::nullopt;
  if (phi_neg->kind != FormulaKind::Not) return std::nullopt;
  FormulaPtr phi = phi_neg->left;
  SchemaRoles roles;
  roles.source = a;
  roles.element = x;
  roles.image = y;
  roles.target = b;
  // choose a uniqueness helper not occurring anywhere
  std::string u = "u";
  while (all_vars(phi).count(u) || u == a || u == x || u == y || u == b) u += "'";
  roles.unique_helper = u;
  if (all_vars(phi).count(b)) return std::nullopt;
  return std::make_pair(phi, roles);
}

}  // namespace detail

// Match a formula against the nine axioms/schemas, up to renaming of bound
// variables. Schema instances are recognized by extracting the witnessing
// formula and rebuilding the instance.
inline std::optional<ZfcMatch> is_zfc_axiom(const FormulaPtr& f) {
  for (const auto& [name, ax] : zfc_axiom_list())
    if (alpha_equal(f, ax)) return ZfcMatch{name, std::nullopt, nullptr};
  FormulaPtr core = proof_core(f);
  if (auto comp = detail::extract_comprehension(core)) {
    FormulaPtr rebuilt = instantiate_schema(SchemaKind::Comprehension, comp->first, comp->second);
    if (alpha_equal(f, rebuilt))
      return ZfcMatch{"Comprehension", SchemaKind::Comprehension, comp->first};
  }
  if (auto repl = detail::extract_replacement(core)) {
    FormulaPtr rebuilt = instantiate_schema(SchemaKind::Replacement, repl->first, repl->second);
    if (alpha_equal(f, rebuilt))
      return ZfcMatch{"Replacement", SchemaKind::Replacement, repl->first};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proofs.

enum class JustKind {
  LogicalAxiom,
  EqualityAxiom,
  ZfcAxiom,
  SchemaInstance,
  ModusPonens,
  Generalization,
  Renaming
};

struct Justification {
  JustKind kind = JustKind::LogicalAxiom;
  int index = 0;                                  // logical (1-5) / equality (1-2)
  std::string zfc_name;                           // ZfcAxiom
  SchemaKind schema = SchemaKind::Comprehension;  // SchemaInstance
  std::size_t from1 = 0, from2 = 0;               // 1-based line references
  std::string var;                                // Generalization
  std::map<std::string, std::string> rename_map;  // Renaming
};

struct ProofLine {
  FormulaPtr formula;
  Justification just;
};

struct Proof {
  std::vector<ProofLine> lines;

  std::size_t add(FormulaPtr f, Justification j) {
    lines.push_back({std::move(f), std::move(j)});
    return lines.size();  // 1-based index of the added line
  }
};

struct CheckResult {
  bool ok = true;
  std::size_t failing_line = 0;  // 1-based; 0 when ok
  std::string message;
};

// Validate every line against its justification. Generalization carries the
// usual proviso about variables free in undischarged assumptions; since this
// calculus has no assumption lines (every leaf is an axiom), the proviso is
// vacuously satisfied and any variable may be generalized.
inline CheckResult check_proof(const Proof& proof) {
  std::vector<FormulaPtr> cores;
  cores.reserve(proof.lines.size());
  for (const auto& line : proof.lines) cores.push_back(proof_core(line.formula));

  auto fail = [](std::size_t n, const std::string& msg) { return CheckResult{false, n, msg}; };

  for (std::size_t n = 0; n < proof.lines.size(); ++n) {
    const ProofLine& line = proof.lines[n];
    const FormulaPtr& core = cores[n];
    const Justification& j = line.just;
    switch (j.kind) {
      case JustKind::LogicalAxiom: {
        auto m = match_logical_axiom(core);
        if (!m || *m != j.index)
          return fail(n + 1, "not an instance of logical axiom " + std::to_string(j.index));
        break;
      }
      case JustKind::EqualityAxiom: {
        auto m = match_equality_axiom(core);
        if (!m || *m != j.index)
          return fail(n + 1, "not an instance of equality axiom " + std::to_string(j.index));
        break;
      }
      case JustKind::ZfcAxiom: {
        auto m = is_zfc_axiom(line.formula);
        if (!m || m->schema.has_value() || m->name != j.zfc_name)
          return fail(n + 1, "not the ZFC axiom '" + j.zfc_name + "'");
        break;
      }
      case JustKind::SchemaInstance: {
        auto m = is_zfc_axiom(line.formula);
        if (!m || !m->schema.has_value() || *m->schema != j.schema)
          return fail(n + 1, "not an instance of the claimed axiom schema");
        break;
      }
      case JustKind::ModusPonens: {
        if (j.from1 == 0 || j.from1 > n || j.from2 == 0 || j.from2 > n)
          return fail(n + 1, "modus ponens referencing an unavailable line");
        const FormulaPtr& ant = cores[j.from1 - 1];
        const FormulaPtr& impl = cores[j.from2 - 1];
        if (impl->kind != FormulaKind::Implies || !formula_eq(impl->left, ant) ||
            !formula_eq(impl->right, core))
          return fail(n + 1, "modus ponens does not apply");
        break;
      }
      case JustKind::Generalization: {
        if (j.from1 == 0 || j.from1 > n) return fail(n + 1, "generalization referencing an unavailable line");
        if (core->kind != FormulaKind::ForAll || core->var != j.var ||
            !formula_eq(core->left, cores[j.from1 - 1]))
          return fail(n + 1, "generalization does not apply");
        break;
      }
      case JustKind::Renaming: {
        if (j.from1 == 0 || j.from1 > n) return fail(n + 1, "renaming referencing an unavailable line");
        FormulaPtr renamed;
        try {
          renamed = rename(cores[j.from1 - 1], j.rename_map);
        } catch (const Error& e) {
          return fail(n + 1, std::string("renaming rejected: ") + e.what());
        }
        if (!formula_eq(renamed, core)) return fail(n + 1, "renaming does not produce this line");
        break;
      }
    }
  }
  return CheckResult{};
}

// Relativize every line. The result is a list of formulas, not a proof:
// relativized axiom lines are premises about the restricting class, not
// axioms, so no checkability claim is made.
inline std::vector<FormulaPtr> relativize_proof(const Proof& proof, const std::string& restrictor) {
  std::vector<FormulaPtr> out;
  out.reserve(proof.lines.size());
  for (const auto& line : proof.lines) out.push_back(relativize(line.formula, restrictor));
  return out;
}

// ---------------------------------------------------------------------------
// Text format: one line per proof step,  "<n>. <formula> ; <justification>".

inline std::string justification_to_string(const Justification& j) {
  std::ostringstream out;
  switch (j.kind) {
    case JustKind::LogicalAxiom:
      out << "L" << j.index;
      break;
    case JustKind::EqualityAxiom:
      out << "E" << j.index;
      break;
    case JustKind::ZfcAxiom:
      out << "zfc " << j.zfc_name;
      break;
    case JustKind::SchemaInstance:
      out << (j.schema == SchemaKind::Comprehension ? "schema comprehension" : "schema replacement");
      break;
    case JustKind::ModusPonens:
      out << "mp " << j.from1 << " " << j.from2;
      break;
    case JustKind::Generalization:
      out << "gen " << j.from1 << " " << j.var;
      break;
    case JustKind::Renaming: {
      out << "rename " << j.from1 << " ";
      bool first = true;
      for (const auto& [a, b] : j.rename_map) {
        if (!first) out << ",";
        first = false;
        out << a << "->" << b;
      }
      break;
    }
  }
  return out.str();
}

inline std::string proof_to_string(const Proof& proof) {
  std::ostringstream out;
  for (std::size_t i = 0; i < proof.lines.size(); ++i)
    out << (i + 1) << ". " << render_formula(proof.lines[i].formula) << " ; "
        << justification_to_string(proof.lines[i].just) << "\n";
  return out.str();
}

inline Proof parse_proof(std::string_view text) {
  Proof proof;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    // trim
    std::size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) continue;
    std::size_t e = raw.find_last_not_of(" \t\r");
    std::string_view lv = raw.substr(b, e - b + 1);
    if (lv.empty() || lv[0] == '#') continue;
    ++line_no;

    std::size_t dot = lv.find('.');
    if (dot == std::string_view::npos) throw Error("proof line " + std::to_string(line_no) + ": missing index");
    std::size_t declared = std::stoul(std::string(lv.substr(0, dot)));
    if (declared != line_no)
      throw Error("proof line " + std::to_string(line_no) + ": out-of-order index " + std::to_string(declared));
    std::size_t semi = lv.rfind(';');
    if (semi == std::string_view::npos || semi <= dot)
      throw Error("proof line " + std::to_string(line_no) + ": missing justification");
    FormulaPtr f = parse_formula(lv.substr(dot + 1, semi - dot - 1));

    std::istringstream js{std::string(lv.substr(semi + 1))};
    std::string tag;
    js >> tag;
    Justification j;
    if (tag.size() == 2 && (tag[0] == 'L' || tag[0] == 'E') && isdigit(static_cast<unsigned char>(tag[1]))) {
      j.kind = tag[0] == 'L' ? JustKind::LogicalAxiom : JustKind::EqualityAxiom;
      j.index = tag[1] - '0';
    } else if (tag == "zfc") {
      j.kind = JustKind::ZfcAxiom;
      js >> j.zfc_name;
    } else if (tag == "schema") {
      j.kind = JustKind::SchemaInstance;
      std::string which;
      js >> which;
      if (which == "comprehension")
        j.schema = SchemaKind::Comprehension;
      else if (which == "replacement")
        j.schema = SchemaKind::Replacement;
      else
        throw Error("proof line " + std::to_string(line_no) + ": unknown schema '" + which + "'");
    } else if (tag == "mp") {
      j.kind = JustKind::ModusPonens;
      js >> j.from1 >> j.from2;
    } else if (tag == "gen") {
      j.kind = JustKind::Generalization;
      js >> j.from1 >> j.var;
    } else if (tag == "rename") {
      j.kind = JustKind::Renaming;
      js >> j.from1;
      std::string maps;
      js >> maps;
      std::size_t mp = 0;
      while (mp < maps.size()) {
        std::size_t comma = maps.find(',', mp);
        if (comma == std::string::npos) comma = maps.size();
        std::string one = maps.substr(mp, comma - mp);
        std::size_t arrow = one.find("->");
        if (arrow == std::string::npos)
          throw Error("proof line " + std::to_string(line_no) + ": bad rename map");
        j.rename_map[one.substr(0, arrow)] = one.substr(arrow + 2);
        mp = comma + 1;
      }
    } else {
      throw Error("proof line " + std::to_string(line_no) + ": unknown justification '" + tag + "'");
    }
    proof.lines.push_back({f, j});
  }
  return proof;
}

}  // namespace forcelab

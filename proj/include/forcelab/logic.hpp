#pragma once

// First-order formulas of the membership language: AST, parser and printer,
// desugaring to the {member, equal, not, and, forall} core, quantifier
// complexity, relativization, and Tarskian evaluation over finite
// membership structures.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"
#include "forcelab/hf.hpp"

namespace forcelab {

enum class FormulaKind { Member, Equal, Not, And, Or, Implies, Iff, ForAll, Exists };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable AST node. Terms are variables only, so atoms carry two variable
// names; quantifiers carry the quantified variable and an optional bound
// variable (first-class bounded quantifier "all x in y . ...").
class Formula {
 public:
  FormulaKind kind;
  std::string lhs, rhs;    // atoms
  std::string var, bound;  // quantifiers; bound empty when absent
  FormulaPtr left, right;  // left = unary child / quantifier body

  static FormulaPtr member(std::string a, std::string b) {
    return atom(FormulaKind::Member, std::move(a), std::move(b));
  }
  static FormulaPtr equal(std::string a, std::string b) {
    return atom(FormulaKind::Equal, std::move(a), std::move(b));
  }
  static FormulaPtr not_(FormulaPtr f) {
    auto n = std::make_shared<Formula>();
    n->kind = FormulaKind::Not;
    n->left = std::move(f);
    return n;
  }
  static FormulaPtr and_(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::And, std::move(l), std::move(r)); }
  static FormulaPtr or_(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::Or, std::move(l), std::move(r)); }
  static FormulaPtr implies(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::Implies, std::move(l), std::move(r)); }
  static FormulaPtr iff(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::Iff, std::move(l), std::move(r)); }
  static FormulaPtr forall(std::string v, FormulaPtr body) { return quant(FormulaKind::ForAll, std::move(v), "", std::move(body)); }
  static FormulaPtr exists(std::string v, FormulaPtr body) { return quant(FormulaKind::Exists, std::move(v), "", std::move(body)); }
  static FormulaPtr forall_in(std::string v, std::string b, FormulaPtr body) {
    return quant(FormulaKind::ForAll, std::move(v), std::move(b), std::move(body));
  }
  static FormulaPtr exists_in(std::string v, std::string b, FormulaPtr body) {
    return quant(FormulaKind::Exists, std::move(v), std::move(b), std::move(body));
  }

  bool is_atom() const { return kind == FormulaKind::Member || kind == FormulaKind::Equal; }
  bool is_quant() const { return kind == FormulaKind::ForAll || kind == FormulaKind::Exists; }

 private:
  static FormulaPtr atom(FormulaKind k, std::string a, std::string b) {
    auto n = std::make_shared<Formula>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }
  static FormulaPtr binary(FormulaKind k, FormulaPtr l, FormulaPtr r) {
    auto n = std::make_shared<Formula>();
    n->kind = k;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
  }
  static FormulaPtr quant(FormulaKind k, std::string v, std::string b, FormulaPtr body) {
    if (!b.empty() && b == v) throw Error("quantifier bound variable must differ from the quantified variable");
    auto n = std::make_shared<Formula>();
    n->kind = k;
    n->var = std::move(v);
    n->bound = std::move(b);
    n->left = std::move(body);
    return n;
  }
};

inline bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      return a->lhs == b->lhs && a->rhs == b->rhs;
    case FormulaKind::Not:
      return formula_eq(a->left, b->left);
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      return a->var == b->var && a->bound == b->bound && formula_eq(a->left, b->left);
    default:
      return formula_eq(a->left, b->left) && formula_eq(a->right, b->right);
  }
}

// ---------------------------------------------------------------------------
// Printing. Grammar levels: quant(0) < iff(1) < imp(2) < or(3) < and(4) <
// unary(5) < atom(6); "->" is right-associative, "&" "|" "<->" left.

namespace detail {

inline int formula_level(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      return 0;
    case FormulaKind::Iff:
      return 1;
    case FormulaKind::Implies:
      return 2;
    case FormulaKind::Or:
      return 3;
    case FormulaKind::And:
      return 4;
    case FormulaKind::Not:
      return 5;
    default:
      return 6;
  }
}

inline void render(const FormulaPtr& f, int min_level, std::string& out) {
  bool parens = formula_level(*f) < min_level;
  if (parens) out += '(';
  switch (f->kind) {
    case FormulaKind::Member:
      out += f->lhs + " in " + f->rhs;
      break;
    case FormulaKind::Equal:
      out += f->lhs + " = " + f->rhs;
      break;
    case FormulaKind::Not:
      out += "~(";
      render(f->left, 0, out);
      out += ')';
      break;
    case FormulaKind::And:
      render(f->left, 4, out);
      out += " & ";
      render(f->right, 5, out);
      break;
    case FormulaKind::Or:
      render(f->left, 3, out);
      out += " | ";
      render(f->right, 4, out);
      break;
    case FormulaKind::Implies:
      render(f->left, 3, out);
      out += " -> ";
      render(f->right, 2, out);
      break;
    case FormulaKind::Iff:
      render(f->left, 1, out);
      out += " <-> ";
      render(f->right, 2, out);
      break;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      out += f->kind == FormulaKind::ForAll ? "all " : "ex ";
      out += f->var;
      if (!f->bound.empty()) out += " in " + f->bound;
      out += " . ";
      render(f->left, 0, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string render_formula(const FormulaPtr& f) {
  std::string out;
  detail::render(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing.
//   formula := quant | iff
//   quant   := ("all"|"ex") VAR ["in" VAR] "." formula
//   iff     := imp {"<->" imp} ; imp := or ["->" imp]
//   or      := and {"|" and}   ; and := unary {"&" unary}
//   unary   := "~" unary | atom
//   atom    := VAR "in" VAR | VAR "=" VAR | "(" formula ")"

namespace detail {

struct FormulaParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r'))
      ++pos;
  }

  static bool ident_start(char c) { return isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string peek_ident() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) return "";
    std::size_t end = pos;
    while (end < text.size() && ident_char(text[end])) ++end;
    return std::string(text.substr(pos, end - pos));
  }

  bool eat_word(std::string_view w) {
    if (peek_ident() == w) {
      pos += w.size();
      return true;
    }
    return false;
  }

  bool eat_sym(std::string_view s) {
    skip_ws();
    if (text.substr(pos, s.size()) == s) {
      // do not let "-" of "->" match inside "<->" etc.; symbols here are unambiguous by order of testing
      pos += s.size();
      return true;
    }
    return false;
  }

  std::string ident() {
    std::string w = peek_ident();
    if (w.empty()) throw ParseError("expected a variable", pos);
    if (w == "all" || w == "ex" || w == "in") throw ParseError("keyword '" + w + "' used as a variable", pos);
    pos += w.size();
    return w;
  }

  FormulaPtr formula() {
    skip_ws();
    std::string w = peek_ident();
    if (w == "all" || w == "ex") {
      pos += w.size();
      std::string v = ident();
      std::string b;
      if (eat_word("in")) b = ident();
      if (!eat_sym(".")) throw ParseError("expected '.' after quantifier", pos);
      FormulaPtr body = formula();
      if (w == "all") return b.empty() ? Formula::forall(v, body) : Formula::forall_in(v, b, body);
      return b.empty() ? Formula::exists(v, body) : Formula::exists_in(v, b, body);
    }
    return iff();
  }

  FormulaPtr iff() {
    FormulaPtr f = imp();
    while (eat_sym("<->")) f = Formula::iff(f, imp());
    return f;
  }

  FormulaPtr imp() {
    FormulaPtr f = disj();
    skip_ws();
    if (text.substr(pos, 2) == "->") {
      pos += 2;
      return Formula::implies(f, imp());
    }
    return f;
  }

  FormulaPtr disj() {
    FormulaPtr f = conj();
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        f = Formula::or_(f, conj());
      } else {
        break;
      }
    }
    return f;
  }

  FormulaPtr conj() {
    FormulaPtr f = unary();
    while (eat_sym("&")) f = Formula::and_(f, unary());
    return f;
  }

  FormulaPtr unary() {
    if (eat_sym("~")) return Formula::not_(unary());
    return atom();
  }

  FormulaPtr atom() {
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      FormulaPtr f = formula();
      if (!eat_sym(")")) throw ParseError("expected ')'", pos);
      return f;
    }
    std::string a = ident();
    if (eat_word("in")) return Formula::member(a, ident());
    if (eat_sym("=")) return Formula::equal(a, ident());
    throw ParseError("expected 'in' or '=' after variable", pos);
  }
};

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text) {
  detail::FormulaParser p{text};
  FormulaPtr f = p.formula();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input after formula", p.pos);
  return f;
}

// ---------------------------------------------------------------------------
// Structural helpers.

inline void collect_free_vars(const FormulaPtr& f, std::set<std::string>& bound_here,
                              std::set<std::string>& out) {
  switch (f->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      if (!bound_here.count(f->lhs)) out.insert(f->lhs);
      if (!bound_here.count(f->rhs)) out.insert(f->rhs);
      return;
    case FormulaKind::Not:
      collect_free_vars(f->left, bound_here, out);
      return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists: {
      if (!f->bound.empty() && !bound_here.count(f->bound)) out.insert(f->bound);
      bool added = bound_here.insert(f->var).second;
      collect_free_vars(f->left, bound_here, out);
      if (added) bound_here.erase(f->var);
      return;
    }
    default:
      collect_free_vars(f->left, bound_here, out);
      collect_free_vars(f->right, bound_here, out);
      return;
  }
}

inline std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free_vars(f, bound, out);
  return out;
}

inline void collect_all_vars(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      out.insert(f->lhs);
      out.insert(f->rhs);
      return;
    case FormulaKind::Not:
      collect_all_vars(f->left, out);
      return;
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      out.insert(f->var);
      if (!f->bound.empty()) out.insert(f->bound);
      collect_all_vars(f->left, out);
      return;
    default:
      collect_all_vars(f->left, out);
      collect_all_vars(f->right, out);
      return;
  }
}

inline std::set<std::string> all_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_all_vars(f, out);
  return out;
}

// Rename every variable occurrence through `map` (identity where unmapped).
// The effective map must be injective on the variables occurring in f; the
// non-injective case is rejected because it can merge distinct variables.
inline FormulaPtr rename(const FormulaPtr& f, const std::map<std::string, std::string>& map) {
  auto apply = [&map](const std::string& v) {
    auto it = map.find(v);
    return it == map.end() ? v : it->second;
  };
  std::set<std::string> vars = all_vars(f);
  std::map<std::string, std::string> image;
  for (const auto& v : vars) {
    std::string w = apply(v);
    auto [it, fresh] = image.emplace(w, v);
    if (!fresh && it->second != v)
      throw Error("rename: map collapses variables '" + it->second + "' and '" + v + "'");
  }
  struct Walker {
    const decltype(apply)& ap;
    FormulaPtr walk(const FormulaPtr& g) {
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
          return g->bound.empty() ? Formula::forall(ap(g->var), walk(g->left))
                                  : Formula::forall_in(ap(g->var), ap(g->bound), walk(g->left));
        case FormulaKind::Exists:
          return g->bound.empty() ? Formula::exists(ap(g->var), walk(g->left))
                                  : Formula::exists_in(ap(g->var), ap(g->bound), walk(g->left));
      }
      throw Error("rename: unreachable");
    }
  } w{apply};
  return w.walk(f);
}

// Desugar to the {Member, Equal, Not, And, ForAll} core, logically
// equivalent on every finite structure:
//   a | b        ~(~a & ~b)
//   a -> b       ~(a & ~b)
//   a <-> b      ~(a & ~b) & ~(b & ~a)
//   ex x . f     ~(all x . ~f)
//   all x in y . f   all x . ~(x in y & ~f)
//   ex x in y . f    ~(all x . ~(x in y & f))
inline FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      return f;
    case FormulaKind::Not:
      return Formula::not_(desugar(f->left));
    case FormulaKind::And:
      return Formula::and_(desugar(f->left), desugar(f->right));
    case FormulaKind::Or:
      return Formula::not_(Formula::and_(Formula::not_(desugar(f->left)), Formula::not_(desugar(f->right))));
    case FormulaKind::Implies:
      return Formula::not_(Formula::and_(desugar(f->left), Formula::not_(desugar(f->right))));
    case FormulaKind::Iff: {
      FormulaPtr a = desugar(f->left), b = desugar(f->right);
      return Formula::and_(Formula::not_(Formula::and_(a, Formula::not_(b))),
                           Formula::not_(Formula::and_(b, Formula::not_(a))));
    }
    case FormulaKind::ForAll: {
      FormulaPtr body = desugar(f->left);
      if (f->bound.empty()) return Formula::forall(f->var, body);
      return Formula::forall(
          f->var, Formula::not_(Formula::and_(Formula::member(f->var, f->bound), Formula::not_(body))));
    }
    case FormulaKind::Exists: {
      FormulaPtr body = desugar(f->left);
      if (f->bound.empty()) return Formula::not_(Formula::forall(f->var, Formula::not_(body)));
      return Formula::not_(Formula::forall(
          f->var, Formula::not_(Formula::and_(Formula::member(f->var, f->bound), body))));
    }
  }
  throw Error("desugar: unreachable");
}

// ---------------------------------------------------------------------------
// Quantifier complexity.

enum class Complexity { Delta0, Sigma1, Pi1, Higher };

inline bool is_delta0(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      return true;
    case FormulaKind::Not:
      return is_delta0(f->left);
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      return !f->bound.empty() && is_delta0(f->left);
    default:
      return is_delta0(f->left) && is_delta0(f->right);
  }
}

inline Complexity classify(const FormulaPtr& f) {
  if (is_delta0(f)) return Complexity::Delta0;
  FormulaPtr g = f;
  std::size_t ex = 0;
  while (g->kind == FormulaKind::Exists && g->bound.empty()) {
    g = g->left;
    ++ex;
  }
  if (ex > 0 && is_delta0(g)) return Complexity::Sigma1;
  g = f;
  std::size_t fa = 0;
  while (g->kind == FormulaKind::ForAll && g->bound.empty()) {
    g = g->left;
    ++fa;
  }
  if (fa > 0 && is_delta0(g)) return Complexity::Pi1;
  return Complexity::Higher;
}

// Guard every unbounded quantifier by the restrictor: all x . f becomes
// all x in M . f (that is, all x . x in M -> f), dually for ex. Bounded
// quantifiers and atoms are untouched. The restrictor must not occur in f.
inline FormulaPtr relativize(const FormulaPtr& f, const std::string& restrictor) {
  if (all_vars(f).count(restrictor))
    throw Error("relativize: restrictor '" + restrictor + "' occurs in the formula");
  struct Walker {
    const std::string& m;
    FormulaPtr walk(const FormulaPtr& g) {
      switch (g->kind) {
        case FormulaKind::Member:
        case FormulaKind::Equal:
          return g;
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
          return g->bound.empty() ? Formula::forall_in(g->var, m, walk(g->left))
                                  : Formula::forall_in(g->var, g->bound, walk(g->left));
        case FormulaKind::Exists:
          return g->bound.empty() ? Formula::exists_in(g->var, m, walk(g->left))
                                  : Formula::exists_in(g->var, g->bound, walk(g->left));
      }
      throw Error("relativize: unreachable");
    }
  } w{restrictor};
  return w.walk(f);
}

// ---------------------------------------------------------------------------
// Finite membership structures and evaluation.

// Nodes are opaque identifiers; edges run member -> container. Labels are
// optional HF values used by the model-theoretic tooling.
struct Structure {
  std::vector<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;
  std::map<std::string, HFSet> labels;

  bool has_node(const std::string& n) const {
    for (const auto& x : nodes)
      if (x == n) return true;
    return false;
  }
  bool has_edge(const std::string& member, const std::string& container) const {
    return edges.count({member, container}) != 0;
  }

  void validate() const {
    std::set<std::string> ns(nodes.begin(), nodes.end());
    if (ns.size() != nodes.size()) throw Error("structure: duplicate node id");
    for (const auto& [c, p] : edges) {
      if (!ns.count(c) || !ns.count(p)) throw Error("structure: edge endpoint not a node");
      if (c == p) throw Error("structure: self-membership edge " + c);
    }
    for (const auto& [id, lab] : labels)
      if (!ns.count(id)) throw Error("structure: label for unknown node " + id);
  }
};

// Build the true-membership structure on a collection of HF values; node ids
// are the canonical text forms.
inline Structure structure_of(const std::vector<HFSet>& values) {
  Structure s;
  std::vector<HFSet> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const HFSet& v : sorted) {
    std::string id = v.to_string();
    s.nodes.push_back(id);
    s.labels.emplace(id, v);
  }
  for (const HFSet& a : sorted)
    for (const HFSet& b : sorted)
      if (b.contains(a)) s.edges.insert({a.to_string(), b.to_string()});
  return s;
}

inline Structure substructure(const Structure& s, const std::set<std::string>& keep) {
  Structure out;
  for (const auto& n : s.nodes)
    if (keep.count(n)) out.nodes.push_back(n);
  for (const auto& e : s.edges)
    if (keep.count(e.first) && keep.count(e.second)) out.edges.insert(e);
  for (const auto& [id, lab] : s.labels)
    if (keep.count(id)) out.labels.emplace(id, lab);
  return out;
}

// Partial map from variables to nodes, plus "set tags": a variable may stand
// for a node subset, which lets a relativized formula's restrictor range
// over an arbitrary subset of the structure.
struct Assignment {
  std::map<std::string, std::string> vars;
  std::map<std::string, std::set<std::string>> tags;

  Assignment with(const std::string& v, const std::string& node) const {
    Assignment a = *this;
    a.vars[v] = node;
    a.tags.erase(v);
    return a;
  }
};

inline bool evaluate(const FormulaPtr& f, const Structure& s, const Assignment& a);

namespace detail {

inline const std::string& node_of(const Assignment& a, const std::string& v) {
  auto it = a.vars.find(v);
  if (it == a.vars.end()) throw Error("evaluate: unassigned free variable '" + v + "'");
  return it->second;
}

// The domain a bounded quantifier ranges over: members of a node, or the
// tag set itself.
inline std::vector<std::string> bound_domain(const Structure& s, const Assignment& a,
                                             const std::string& bound_var) {
  auto tag = a.tags.find(bound_var);
  if (tag != a.tags.end()) return {tag->second.begin(), tag->second.end()};
  const std::string& container = node_of(a, bound_var);
  std::vector<std::string> out;
  for (const auto& n : s.nodes)
    if (s.has_edge(n, container)) out.push_back(n);
  return out;
}

}  // namespace detail

inline bool evaluate(const FormulaPtr& f, const Structure& s, const Assignment& a) {
  switch (f->kind) {
    case FormulaKind::Member: {
      auto tag = a.tags.find(f->rhs);
      const std::string& x = detail::node_of(a, f->lhs);
      if (tag != a.tags.end()) return tag->second.count(x) != 0;
      return s.has_edge(x, detail::node_of(a, f->rhs));
    }
    case FormulaKind::Equal:
      return detail::node_of(a, f->lhs) == detail::node_of(a, f->rhs);
    case FormulaKind::Not:
      return !evaluate(f->left, s, a);
    case FormulaKind::And:
      return evaluate(f->left, s, a) && evaluate(f->right, s, a);
    case FormulaKind::Or:
      return evaluate(f->left, s, a) || evaluate(f->right, s, a);
    case FormulaKind::Implies:
      return !evaluate(f->left, s, a) || evaluate(f->right, s, a);
    case FormulaKind::Iff:
      return evaluate(f->left, s, a) == evaluate(f->right, s, a);
    case FormulaKind::ForAll: {
      if (f->bound.empty()) {
        for (const auto& n : s.nodes)
          if (!evaluate(f->left, s, a.with(f->var, n))) return false;
        return true;
      }
      for (const auto& n : detail::bound_domain(s, a, f->bound))
        if (!evaluate(f->left, s, a.with(f->var, n))) return false;
      return true;
    }
    case FormulaKind::Exists: {
      if (f->bound.empty()) {
        for (const auto& n : s.nodes)
          if (evaluate(f->left, s, a.with(f->var, n))) return true;
        return false;
      }
      for (const auto& n : detail::bound_domain(s, a, f->bound))
        if (evaluate(f->left, s, a.with(f->var, n))) return true;
      return false;
    }
  }
  throw Error("evaluate: unreachable");
}

}  // namespace forcelab

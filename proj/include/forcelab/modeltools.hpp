#pragma once

// Model-theoretic tooling over finite membership digraphs: extensionality
// checking, Mostowski collapse, witness-closure for reflection, and the
// reflection test itself.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"
#include "forcelab/hf.hpp"
#include "forcelab/logic.hpp"

namespace forcelab {

// Finite directed membership graph; edges run member -> container. Node ids
// double as display labels (they may name infinite sets: only the edge
// structure matters).
struct MembershipDigraph {
  std::vector<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;

  void validate() const {
    std::set<std::string> ns(nodes.begin(), nodes.end());
    if (ns.size() != nodes.size()) throw Error("digraph: duplicate node");
    for (const auto& [c, p] : edges) {
      if (!ns.count(c) || !ns.count(p)) throw Error("digraph: edge endpoint not a node");
      if (c == p) throw Error("digraph: self-membership edge at " + c);
    }
  }

  std::vector<std::string> members_of(const std::string& n) const {
    std::vector<std::string> out;
    for (const auto& [c, p] : edges)
      if (p == n) out.push_back(c);
    return out;
  }
};

// Extensionality within the digraph: distinct nodes must have distinct
// member sets. Returns a witness pair when it fails.
inline std::optional<std::pair<std::string, std::string>> extensionality_counterexample(
    const MembershipDigraph& g) {
  g.validate();
  std::map<std::string, std::set<std::string>> members;
  for (const auto& n : g.nodes) members[n] = {};
  for (const auto& [c, p] : g.edges) members[p].insert(c);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j)
      if (members[g.nodes[i]] == members[g.nodes[j]]) return std::make_pair(g.nodes[i], g.nodes[j]);
  return std::nullopt;
}

inline bool check_extensional(const MembershipDigraph& g) { return !extensionality_counterexample(g); }

// The collapse f(x) = { f(y) | y a member of x }, computed by memoized
// descent. Requires an extensional, acyclic digraph; the image is a
// transitive set of HF values and f is a membership isomorphism.
inline std::map<std::string, HFSet> mostowski_collapse(const MembershipDigraph& g) {
  if (auto w = extensionality_counterexample(g))
    throw Error("mostowski_collapse: not extensional (nodes '" + w->first + "', '" + w->second + "')");
  std::map<std::string, HFSet> done;
  std::set<std::string> in_progress;
  struct Rec {
    const MembershipDigraph& g;
    std::map<std::string, HFSet>& done;
    std::set<std::string>& in_progress;
    const HFSet& collapse(const std::string& n) {
      auto it = done.find(n);
      if (it != done.end()) return it->second;
      if (!in_progress.insert(n).second)
        throw Error("mostowski_collapse: membership cycle through '" + n + "'");
      std::vector<HFSet> kids;
      for (const auto& m : g.members_of(n)) kids.push_back(collapse(m));
      in_progress.erase(n);
      return done.emplace(n, HFSet::make(std::move(kids))).first->second;
    }
  } rec{g, done, in_progress};
  for (const auto& n : g.nodes) rec.collapse(n);
  return done;
}

// ---------------------------------------------------------------------------
// Reflection.

// Does M reflect f in the ambient structure for the given parameters?
// Compares the plain evaluation with evaluation of the relativized formula,
// the restrictor ranging over the node subset M.
inline bool check_reflection(const FormulaPtr& f, const std::set<std::string>& m_nodes,
                             const Structure& ambient, const Assignment& params) {
  for (const auto& [v, node] : params.vars)
    if (!m_nodes.count(node)) throw Error("check_reflection: parameter '" + v + "' outside M");
  std::string restrictor = "_M";
  while (all_vars(f).count(restrictor)) restrictor += "_";
  Assignment tagged = params;
  tagged.tags[restrictor] = m_nodes;
  bool plain = evaluate(f, ambient, params);
  bool rel = evaluate(relativize(f, restrictor), ambient, tagged);
  return plain == rel;
}

struct ReflectionReport {
  std::set<std::string> closure;              // the produced node set M
  std::vector<FormulaPtr> formulas;           // the input list
  std::vector<bool> reflected;                // per input formula, over all params in M
  std::map<std::string, HFSet> collapse_map;  // Mostowski collapse of M
};

namespace detail {

inline void subformulas_into(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  out.push_back(f);
  switch (f->kind) {
    case FormulaKind::Member:
    case FormulaKind::Equal:
      return;
    case FormulaKind::Not:
    case FormulaKind::ForAll:
    case FormulaKind::Exists:
      subformulas_into(f->left, out);
      return;
    default:
      subformulas_into(f->left, out);
      subformulas_into(f->right, out);
      return;
  }
}

// Deterministic witness order: rank of the HF label first, then canonical
// HF order, then the node id.
inline std::vector<std::string> witness_order(const Structure& ambient) {
  std::vector<std::string> order = ambient.nodes;
  std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    auto la = ambient.labels.find(a);
    auto lb = ambient.labels.find(b);
    if (la != ambient.labels.end() && lb != ambient.labels.end()) {
      int c = HFSet::cmp(la->second, lb->second);
      if (c != 0) return c < 0;
    }
    return a < b;
  });
  return order;
}

}  // namespace detail

// The membership digraph induced by a node subset of a structure.
inline MembershipDigraph induced_digraph(const Structure& s, const std::set<std::string>& keep) {
  MembershipDigraph g;
  for (const auto& n : s.nodes)
    if (keep.count(n)) g.nodes.push_back(n);
  for (const auto& e : s.edges)
    if (keep.count(e.first) && keep.count(e.second)) g.edges.insert(e);
  return g;
}

// Witness closure over a finite ambient universe. The working list is the
// subformula closure of the inputs plus the extensionality axiom, together
// with all negations; for each listed formula, each free variable position
// and each parameter tuple from M, if the ambient has a witness then the
// least witness (by label rank, then canonical HF order) is pulled into M.
// Iterates to a fixed point, which the finite ambient guarantees.
inline ReflectionReport reflect_closure(const std::vector<FormulaPtr>& formulas,
                                        const Structure& ambient,
                                        const std::set<std::string>& seed) {
  ambient.validate();
  for (const auto& n : seed)
    if (!ambient.has_node(n)) throw Error("reflect_closure: seed node '" + n + "' not in ambient");

  std::vector<FormulaPtr> work;
  FormulaPtr ext = parse_formula("all x . all y . ((all z . (z in x <-> z in y)) <-> x = y)");
  detail::subformulas_into(ext, work);
  for (const auto& f : formulas) detail::subformulas_into(f, work);
  {
    std::vector<FormulaPtr> with_negs = work;
    for (const auto& f : work) with_negs.push_back(Formula::not_(f));
    work = std::move(with_negs);
  }

  std::vector<std::string> order = detail::witness_order(ambient);
  std::set<std::string> m = seed;

  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& f : work) {
      std::vector<std::string> fv(free_vars(f).begin(), free_vars(f).end());
      if (fv.empty()) continue;
      for (std::size_t j = 0; j < fv.size(); ++j) {
        // enumerate assignments of the other free variables into M
        std::vector<std::string> others;
        for (std::size_t i = 0; i < fv.size(); ++i)
          if (i != j) others.push_back(fv[i]);
        std::vector<std::string> pool(m.begin(), m.end());
        std::vector<std::size_t> idx(others.size(), 0);
        bool more = true;
        if (!others.empty() && pool.empty()) more = false;
        while (more) {
          Assignment a;
          for (std::size_t i = 0; i < others.size(); ++i) a.vars[others[i]] = pool[idx[i]];
          // a witness already inside M?
          bool have = false;
          for (const auto& n : m)
            if (evaluate(f, ambient, a.with(fv[j], n))) {
              have = true;
              break;
            }
          if (!have) {
            for (const auto& n : order)
              if (evaluate(f, ambient, a.with(fv[j], n))) {
                if (m.insert(n).second) grew = true;
                break;
              }
          }
          // advance the tuple
          std::size_t k = 0;
          for (; k < idx.size(); ++k) {
            if (++idx[k] < pool.size()) break;
            idx[k] = 0;
          }
          if (k == idx.size()) more = false;
          if (others.empty()) more = false;
        }
      }
    }
  }

  ReflectionReport report;
  report.closure = m;
  report.formulas = formulas;
  for (const auto& f : formulas) {
    std::vector<std::string> fv(free_vars(f).begin(), free_vars(f).end());
    std::vector<std::string> pool(m.begin(), m.end());
    bool ok = true;
    if (fv.empty()) {
      ok = check_reflection(f, m, ambient, Assignment{});
    } else if (!pool.empty()) {
      std::vector<std::size_t> idx(fv.size(), 0);
      bool more = true;
      while (more && ok) {
        Assignment a;
        for (std::size_t i = 0; i < fv.size(); ++i) a.vars[fv[i]] = pool[idx[i]];
        ok = check_reflection(f, m, ambient, a);
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
          if (++idx[k] < pool.size()) break;
          idx[k] = 0;
        }
        if (k == idx.size()) more = false;
      }
    }
    report.reflected.push_back(ok);
  }
  if (check_extensional(induced_digraph(ambient, m)))
    report.collapse_map = mostowski_collapse(induced_digraph(ambient, m));
  return report;
}

}  // namespace forcelab

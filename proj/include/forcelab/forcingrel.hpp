#pragma once

// The recursive forcing relation over a finite poset and a bounded name
// universe, the brute-force semantic oracle that quantifies over maximal
// ideals, the equivalence/coherence/truth checker, and the name
// constructions that transfer pairing, union, power and comprehension.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"
#include "forcelab/forcing.hpp"
#include "forcelab/logic.hpp"
#include "forcelab/names.hpp"

namespace forcelab {

// Bundles a finite poset with a saturated, subname-closed name universe and
// the memo tables the recursion leans on. Bindings map formula variables to
// universe names. All queries are deterministic; the memo tables only ever
// cache final values, so concurrent readers are safe once warmed.
class ForcingEnv {
 public:
  using Binding = std::map<std::string, PName>;

  ForcingEnv(Poset poset, const std::vector<PName>& universe) : poset_(std::move(poset)) {
    if (!poset_.finite()) throw Error("ForcingEnv: poset must be finite");
    conds_ = poset_.all_conditions();
    std::vector<PName> pool;
    for (const auto& n : universe) collect_subnames(saturate(n, poset_), pool);
    pool.push_back(PName());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    names_ = std::move(pool);

    std::size_t c = conds_.size();
    leq_.assign(c, std::vector<bool>(c, false));
    ups_.assign(c, {});
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (poset_.leq(conds_[i], conds_[j])) {
          leq_[i][j] = true;
          ups_[i].push_back(j);
        }
    for (std::size_t i = 0; i < c; ++i) {
      bool maximal = true;
      for (std::size_t j = 0; j < c; ++j)
        if (j != i && leq_[i][j]) maximal = false;
      if (maximal) maximal_.push_back(i);
    }

    name_pairs_.resize(names_.size());
    for (std::size_t n = 0; n < names_.size(); ++n)
      for (const auto& [sub, cond] : names_[n].pairs())
        name_pairs_[n].emplace_back(name_index(sub), cond_index(cond));

    eq_memo_.assign(names_.size() * names_.size() * c, 0);
    mem_memo_.assign(names_.size() * names_.size() * c, 0);
  }

  const Poset& poset() const { return poset_; }
  const std::vector<PName>& universe() const { return names_; }
  const std::vector<Condition>& conditions() const { return conds_; }
  const std::vector<std::size_t>& maximal_indices() const { return maximal_; }
  const std::vector<std::size_t>& ups(std::size_t ci) const { return ups_[ci]; }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }

  std::size_t cond_index(const Condition& c) const {
    auto it = std::lower_bound(conds_.begin(), conds_.end(), c);
    if (it == conds_.end() || !(*it == c)) throw Error("ForcingEnv: unknown condition " + c.to_string());
    return std::size_t(it - conds_.begin());
  }

  std::size_t name_index(const PName& n) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), n);
    if (it == names_.end() || !(*it == n)) throw Error("ForcingEnv: name outside the universe");
    return std::size_t(it - names_.begin());
  }

  // p forces t1 = t2: every tagged member of one is, above every extension,
  // matched by a forced-equal tagged member of the other. Recursion is on
  // name rank; results are memoized.
  bool forces_eq(std::size_t ci, std::size_t a, std::size_t b) const {
    if (a == b) return true;
    if (a > b) std::swap(a, b);
    std::uint8_t& slot = eq_memo_[(a * names_.size() + b) * conds_.size() + ci];
    if (slot) return slot == 2;
    bool val = half_eq(ci, a, b) && half_eq(ci, b, a);
    slot = val ? 2 : 1;
    return val;
  }

  // p forces t1 in t2: above every extension of p there is a condition that
  // both tags some member of t2 and forces it equal to t1.
  bool forces_mem(std::size_t ci, std::size_t a, std::size_t b) const {
    std::uint8_t& slot = mem_memo_[(a * names_.size() + b) * conds_.size() + ci];
    if (slot) return slot == 2;
    bool val = true;
    for (std::size_t q : ups_[ci]) {
      bool found = false;
      for (const auto& [sub, r] : name_pairs_[b])
        if (leq_[q][r] && forces_eq(r, a, sub)) {
          found = true;
          break;
        }
      if (!found) {
        val = false;
        break;
      }
    }
    slot = val ? 2 : 1;
    return val;
  }

  using IndexBinding = std::map<std::string, std::size_t>;

  // Forcing values of a desugared formula at every condition at once.
  std::vector<std::uint8_t> forces_all(const FormulaPtr& core, const IndexBinding& binding) const {
    std::size_t c = conds_.size();
    std::vector<std::uint8_t> v(c, 0);
    switch (core->kind) {
      case FormulaKind::Member:
      case FormulaKind::Equal: {
        std::size_t a = bound_name(binding, core->lhs);
        std::size_t b = bound_name(binding, core->rhs);
        for (std::size_t i = 0; i < c; ++i)
          v[i] = core->kind == FormulaKind::Member ? forces_mem(i, a, b) : forces_eq(i, a, b);
        return v;
      }
      case FormulaKind::Not: {
        std::vector<std::uint8_t> inner = forces_all(core->left, binding);
        for (std::size_t i = 0; i < c; ++i) {
          bool none = true;
          for (std::size_t q : ups_[i])
            if (inner[q]) {
              none = false;
              break;
            }
          v[i] = none;
        }
        return v;
      }
      case FormulaKind::And: {
        std::vector<std::uint8_t> l = forces_all(core->left, binding);
        std::vector<std::uint8_t> r = forces_all(core->right, binding);
        for (std::size_t i = 0; i < c; ++i) v[i] = l[i] && r[i];
        return v;
      }
      case FormulaKind::ForAll: {
        if (!core->bound.empty()) throw Error("forces_all: formula must be desugared");
        std::fill(v.begin(), v.end(), 1);
        for (std::size_t t = 0; t < names_.size(); ++t) {
          IndexBinding inner_binding = binding;
          inner_binding[core->var] = t;
          std::vector<std::uint8_t> inner = forces_all(core->left, inner_binding);
          // necessarily possible: above every extension some further
          // extension forces the instance
          std::vector<std::uint8_t> poss(c, 0);
          for (std::size_t q = 0; q < c; ++q)
            for (std::size_t r : ups_[q])
              if (inner[r]) {
                poss[q] = 1;
                break;
              }
          for (std::size_t i = 0; i < c; ++i) {
            if (!v[i]) continue;
            for (std::size_t q : ups_[i])
              if (!poss[q]) {
                v[i] = 0;
                break;
              }
          }
        }
        return v;
      }
      default:
        throw Error("forces_all: formula must be desugared to the member/equal/not/and/forall core");
    }
  }

  bool forces(const Condition& p, const FormulaPtr& f, const Binding& binding) const {
    IndexBinding ib;
    for (const auto& [v, n] : binding) ib[v] = name_index(saturate(n, poset_));
    std::vector<std::uint8_t> v = forces_all(desugar(f), ib);
    return v[cond_index(p)];
  }

  // The evaluated structure at a maximal ideal, built lazily and cached.
  const MGUniverse& mg_at(std::size_t max_pos) const {
    if (mg_.empty()) {
      mg_.resize(maximal_.size());
      mg_built_.assign(maximal_.size(), false);
    }
    if (!mg_built_[max_pos]) {
      Ideal g = Ideal::principal(conds_[maximal_[max_pos]], poset_);
      mg_[max_pos] = mg_universe(names_, g, poset_);
      mg_built_[max_pos] = true;
      // dense edge matrix for the fast evaluator
      const MGUniverse& mg = mg_[max_pos];
      std::size_t n = mg.node_values.size();
      edge_matrix_.resize(maximal_.size());
      edge_matrix_[max_pos].assign(n, std::vector<bool>(n, false));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (mg.node_values[j].contains(mg.node_values[i])) edge_matrix_[max_pos][i][j] = true;
    }
    return mg_[max_pos];
  }

  // Truth of a desugared formula in the evaluated structure at maximal_[max_pos].
  bool truth_at(std::size_t max_pos, const FormulaPtr& core, const IndexBinding& name_binding) const {
    const MGUniverse& mg = mg_at(max_pos);
    std::map<std::string, std::size_t> nodes;
    for (const auto& [v, ni] : name_binding) nodes[v] = mg.name_to_node[ni];
    return truth_core(max_pos, core, nodes);
  }

  // The semantic relation: truth in the evaluated structure of every maximal
  // ideal containing p.
  bool semantic_forces(const Condition& p, const FormulaPtr& f, const Binding& binding) const {
    IndexBinding ib;
    for (const auto& [v, n] : binding) ib[v] = name_index(saturate(n, poset_));
    FormulaPtr core = desugar(f);
    std::size_t pi = cond_index(p);
    for (std::size_t mp = 0; mp < maximal_.size(); ++mp)
      if (leq_[pi][maximal_[mp]] && !truth_at(mp, core, ib)) return false;
    return true;
  }

 private:
  bool half_eq(std::size_t ci, std::size_t a, std::size_t b) const {
    for (const auto& [sub1, q] : name_pairs_[a]) {
      if (!leq_[ci][q]) continue;
      bool found = false;
      for (const auto& [sub2, r] : name_pairs_[b])
        if (leq_[q][r] && forces_eq(r, sub1, sub2)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  }

  static std::size_t bound_name(const IndexBinding& binding, const std::string& var) {
    auto it = binding.find(var);
    if (it == binding.end()) throw Error("forces: unbound variable '" + var + "'");
    return it->second;
  }

  bool truth_core(std::size_t mi, const FormulaPtr& f, std::map<std::string, std::size_t>& nodes) const {
    switch (f->kind) {
      case FormulaKind::Member:
        return edge_matrix_[mi][node_at(nodes, f->lhs)][node_at(nodes, f->rhs)];
      case FormulaKind::Equal:
        return node_at(nodes, f->lhs) == node_at(nodes, f->rhs);
      case FormulaKind::Not:
        return !truth_core(mi, f->left, nodes);
      case FormulaKind::And:
        return truth_core(mi, f->left, nodes) && truth_core(mi, f->right, nodes);
      case FormulaKind::ForAll: {
        std::size_t n = mg_[mi].node_values.size();
        auto saved = nodes.find(f->var);
        std::optional<std::size_t> old;
        if (saved != nodes.end()) old = saved->second;
        for (std::size_t i = 0; i < n; ++i) {
          nodes[f->var] = i;
          if (!truth_core(mi, f->left, nodes)) {
            restore(nodes, f->var, old);
            return false;
          }
        }
        restore(nodes, f->var, old);
        return true;
      }
      default:
        throw Error("truth_core: formula must be desugared");
    }
  }

  static std::size_t node_at(const std::map<std::string, std::size_t>& nodes, const std::string& v) {
    auto it = nodes.find(v);
    if (it == nodes.end()) throw Error("truth_core: unbound variable '" + v + "'");
    return it->second;
  }

  static void restore(std::map<std::string, std::size_t>& nodes, const std::string& v,
                      const std::optional<std::size_t>& old) {
    if (old)
      nodes[v] = *old;
    else
      nodes.erase(v);
  }

  Poset poset_;
  std::vector<Condition> conds_;
  std::vector<PName> names_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> name_pairs_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<std::size_t>> ups_;
  std::vector<std::size_t> maximal_;
  mutable std::vector<std::uint8_t> eq_memo_, mem_memo_;
  mutable std::vector<MGUniverse> mg_;
  mutable std::vector<bool> mg_built_;
  mutable std::vector<std::vector<std::vector<bool>>> edge_matrix_;
};

// ---------------------------------------------------------------------------
// The equivalence / coherence / truth report.

struct FtfViolation {
  std::string kind;  // "oracle", "coherence", "maximal-truth"
  Condition p;
  std::string formula;
  std::map<std::string, std::size_t> binding;  // variable -> universe index
  bool symbolic = false;
  bool semantic = false;
};

struct FtfReport {
  std::vector<FtfViolation> violations;
  std::size_t formulas = 0;
  std::size_t bindings = 0;
  std::size_t checks = 0;
  bool ok() const { return violations.empty(); }
};

// Optional override of the symbolic side, used by the mutation harness to
// prove the checker notices a corrupted recursion.
using SymbolicOverride =
    std::function<std::vector<std::uint8_t>(const ForcingEnv&, const FormulaPtr& core,
                                            const ForcingEnv::IndexBinding&)>;

// For every formula, every binding of its free variables to universe names
// and every condition: the recursion must agree with the semantic oracle;
// forcing must persist upward; and at maximal elements forcing must equal
// truth in the evaluated structure.
inline FtfReport check_ftf(const ForcingEnv& env, const std::vector<FormulaPtr>& family,
                           std::size_t max_violations = 32,
                           const SymbolicOverride& symbolic = nullptr) {
  FtfReport report;
  std::size_t c = env.conditions().size();
  std::size_t u = env.universe().size();
  for (const auto& f : family) {
    ++report.formulas;
    FormulaPtr core = desugar(f);
    std::vector<std::string> fv(free_vars(f).begin(), free_vars(f).end());
    std::vector<std::size_t> idx(fv.size(), 0);
    bool more = true;
    while (more) {
      ForcingEnv::IndexBinding binding;
      for (std::size_t i = 0; i < fv.size(); ++i) binding[fv[i]] = idx[i];
      ++report.bindings;

      std::vector<std::uint8_t> symb =
          symbolic ? symbolic(env, core, binding) : env.forces_all(core, binding);
      std::vector<std::uint8_t> truth(env.maximal_indices().size(), 0);
      for (std::size_t mp = 0; mp < env.maximal_indices().size(); ++mp)
        truth[mp] = env.truth_at(mp, core, binding);

      auto record = [&](const char* kind, std::size_t ci, bool sy, bool se) {
        if (report.violations.size() >= max_violations) return;
        report.violations.push_back(
            FtfViolation{kind, env.conditions()[ci], render_formula(f), binding, sy, se});
      };

      for (std::size_t ci = 0; ci < c; ++ci) {
        bool oracle = true;
        for (std::size_t mp = 0; mp < env.maximal_indices().size(); ++mp)
          if (env.leq(ci, env.maximal_indices()[mp]) && !truth[mp]) {
            oracle = false;
            break;
          }
        ++report.checks;
        if (bool(symb[ci]) != oracle) record("oracle", ci, symb[ci], oracle);
      }
      for (std::size_t ci = 0; ci < c; ++ci) {
        if (!symb[ci]) continue;
        for (std::size_t q : env.ups(ci))
          if (!symb[q]) {
            record("coherence", ci, symb[ci], symb[q]);
            break;
          }
      }
      for (std::size_t mp = 0; mp < env.maximal_indices().size(); ++mp) {
        std::size_t mi = env.maximal_indices()[mp];
        if (bool(symb[mi]) != bool(truth[mp])) record("maximal-truth", mi, symb[mi], truth[mp]);
      }

      std::size_t k = 0;
      for (; k < idx.size(); ++k) {
        if (++idx[k] < u) break;
        idx[k] = 0;
      }
      if (k == idx.size()) more = false;
      if (fv.empty()) more = false;
    }
  }
  return report;
}

// The generated family for the equivalence run: atoms over two variables,
// one level of negation, implication and conjunction, and a single
// universe-bounded universal quantifier.
inline std::vector<FormulaPtr> default_formula_family() {
  std::vector<std::string> atom_texts = {"x = y", "x in y", "y in x", "x = x", "x in x"};
  std::vector<FormulaPtr> atoms;
  for (const auto& t : atom_texts) atoms.push_back(parse_formula(t));
  std::vector<FormulaPtr> out = atoms;
  for (const auto& a : atoms) out.push_back(Formula::not_(a));
  for (const auto& a : atoms)
    for (const auto& b : atoms) {
      out.push_back(Formula::implies(a, b));
      out.push_back(Formula::and_(a, b));
    }
  for (const auto& t : {"all z . z in x", "all z . ~(z in x)", "all z . (z in x -> z in y)",
                        "all z . (x in z -> y in z)", "all z . z = x"})
    out.push_back(parse_formula(t));
  return out;
}

// ---------------------------------------------------------------------------
// Axiom-transfer name constructions.

// { (s, p) in t | p forces f(s) }: the comprehension name. The designated
// variable is bound to each tagged member in turn; other free variables of f
// must be provided in `params`.
inline PName comprehension_name(const PName& t, const FormulaPtr& f, const std::string& designated,
                                const ForcingEnv::Binding& params, const ForcingEnv& env) {
  PName sat = saturate(t, env.poset());
  FormulaPtr core = desugar(f);
  ForcingEnv::IndexBinding base;
  for (const auto& [v, n] : params) base[v] = env.name_index(saturate(n, env.poset()));
  std::vector<PName::Pair> kept;
  std::map<std::size_t, std::vector<std::uint8_t>> cache;  // member index -> forces vector
  for (const auto& [sub, cond] : sat.pairs()) {
    std::size_t si = env.name_index(sub);
    auto it = cache.find(si);
    if (it == cache.end()) {
      ForcingEnv::IndexBinding binding = base;
      binding[designated] = si;
      it = cache.emplace(si, env.forces_all(core, binding)).first;
    }
    if (it->second[env.cond_index(cond)]) kept.emplace_back(sub, cond);
  }
  return PName::make(std::move(kept));
}

// { (s, p), (t, p) : p in P }: evaluates to the unordered pair {s^G, t^G}.
inline PName pairing_name(const PName& s, const PName& t, const Poset& p) {
  std::vector<PName::Pair> pairs;
  for (const auto& c : p.all_conditions()) {
    pairs.emplace_back(s, c);
    pairs.emplace_back(t, c);
  }
  return PName::make(std::move(pairs));
}

// { (r, p) : (r, p) in s for some (s, p) in t }: evaluates to the members of
// members of t^G. Exact for saturated input.
inline PName union_name(const PName& t) {
  std::vector<PName::Pair> pairs;
  for (const auto& [sub, cond] : t.pairs())
    for (const auto& [inner, cond2] : sub.pairs())
      if (cond2 == cond) pairs.emplace_back(inner, cond);
  return PName::make(std::move(pairs));
}

namespace detail {

// All up-closed subsets of a set of conditions (itself up-closed in P).
inline std::vector<std::vector<Condition>> up_closed_subsets(const Poset& p,
                                                             std::vector<Condition> u,
                                                             std::size_t budget) {
  if (u.size() > 20) throw Error("power_name: condition set too large to enumerate");
  std::sort(u.begin(), u.end());
  std::vector<std::vector<Condition>> out;
  std::size_t n = u.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i) {
      if (!(mask & (std::size_t(1) << i))) continue;
      for (std::size_t j = 0; j < n && closed; ++j)
        if (p.leq(u[i], u[j]) && !(mask & (std::size_t(1) << j))) closed = false;
    }
    if (!closed) continue;
    std::vector<Condition> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t(1) << i)) subset.push_back(u[i]);
    out.push_back(std::move(subset));
    if (out.size() > budget) throw Error("power_name: budget exceeded");
  }
  return out;
}

}  // namespace detail

// { (s, p) : s a saturated sub-name of t, p in P }: evaluates to the full
// powerset of t^G at this finite scale, since every subset of the evaluation
// is realized by a saturated selection of t's pairs.
inline PName power_name(const PName& t, const Poset& p, std::size_t budget = 4096) {
  PName sat_t = saturate(t, p);
  // group the tagging conditions per distinct member name
  std::vector<std::pair<PName, std::vector<Condition>>> groups;
  for (const auto& [sub, cond] : sat_t.pairs()) {
    bool found = false;
    for (auto& g : groups)
      if (g.first == sub) {
        g.second.push_back(cond);
        found = true;
        break;
      }
    if (!found) groups.push_back({sub, {cond}});
  }
  std::vector<std::vector<std::vector<Condition>>> choices;  // per group: up-closed tag sets
  for (auto& g : groups) choices.push_back(detail::up_closed_subsets(p, g.second, budget));

  std::vector<PName> subsets;
  std::vector<std::size_t> idx(groups.size(), 0);
  while (true) {
    std::vector<PName::Pair> pairs;
    for (std::size_t i = 0; i < groups.size(); ++i)
      for (const auto& c : choices[i][idx[i]]) pairs.emplace_back(groups[i].first, c);
    subsets.push_back(PName::make(std::move(pairs)));
    if (subsets.size() > budget) throw Error("power_name: budget exceeded");
    std::size_t k = 0;
    for (; k < idx.size(); ++k) {
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
    }
    if (k == idx.size()) break;
    if (groups.empty()) break;
  }

  std::vector<PName::Pair> pairs;
  for (const auto& s : subsets)
    for (const auto& c : p.all_conditions()) pairs.emplace_back(s, c);
  return PName::make(std::move(pairs));
}

// The forcing-defined subset name: { (r, p) : r tagged in t, p forces r in s }.
// Evaluates to s^G whenever s^G is a subset of t^G.
inline PName subset_name_via_forcing(const PName& t, const PName& s, const ForcingEnv& env) {
  std::size_t si = env.name_index(saturate(s, env.poset()));
  std::vector<PName::Pair> pairs;
  std::vector<PName> members;
  for (const auto& [sub, cond] : saturate(t, env.poset()).pairs()) members.push_back(sub);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (const auto& r : members) {
    std::size_t ri = env.name_index(r);
    for (std::size_t ci = 0; ci < env.conditions().size(); ++ci)
      if (env.forces_mem(ci, ri, si)) pairs.emplace_back(r, env.conditions()[ci]);
  }
  return PName::make(std::move(pairs));
}

}  // namespace forcelab

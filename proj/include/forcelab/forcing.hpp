#pragma once

// Forcing posets at desk scale: conditions as finite partial functions on a
// grid (or finite partial injections for collapse posets), ideals, dense
// families with extension finders, generic-ideal construction, atoms and
// separativity, antichain tools and the finite sunflower finder.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"
#include "forcelab/hf.hpp"

namespace forcelab {

struct Cell {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  auto operator<=>(const Cell&) const = default;
};

// A finite partial function from cells to values. Grid posets use values in
// {0,1}; collapse posets store a partial injection a -> b as (a,0) -> b;
// explicit posets wrap an element index as (0,0) -> i.
class Condition {
 public:
  Condition() = default;

  static Condition of(std::initializer_list<std::pair<Cell, std::uint32_t>> cells) {
    Condition c;
    for (const auto& [cell, v] : cells) c.set(cell, v);
    return c;
  }

  void set(Cell cell, std::uint32_t value) { cells_[cell] = value; }

  const std::map<Cell, std::uint32_t>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  std::optional<std::uint32_t> at(Cell cell) const {
    auto it = cells_.find(cell);
    if (it == cells_.end()) return std::nullopt;
    return it->second;
  }

  bool subset_of(const Condition& o) const {
    for (const auto& [cell, v] : cells_) {
      auto w = o.at(cell);
      if (!w || *w != v) return false;
    }
    return true;
  }

  std::set<Cell> domain() const {
    std::set<Cell> d;
    for (const auto& [cell, v] : cells_) d.insert(cell);
    return d;
  }

  auto operator<=>(const Condition& o) const { return cells_ <=> o.cells_; }
  bool operator==(const Condition& o) const { return cells_ == o.cells_; }

  std::string to_string() const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [cell, v] : cells_) {
      if (!first) out << ", ";
      first = false;
      out << '(' << cell.row << ',' << cell.col << ")->" << v;
    }
    out << '}';
    return out.str();
  }

 private:
  std::map<Cell, std::uint32_t> cells_;
};

enum class PosetKind { FiniteGrid, InfiniteGrid, Collapse, Explicit };

// A forcing notion. Order is extension: p <= q when q extends p. Grid and
// collapse kinds are separative by construction (the order is set
// inclusion); explicit kinds are validated.
class Poset {
 public:
  static Poset finite_grid(std::uint32_t rows, std::uint32_t cols) {
    Poset p;
    p.kind_ = PosetKind::FiniteGrid;
    p.rows_ = rows;
    p.cols_ = cols;
    return p;
  }

  // rows x omega: finitely many rows, unboundedly many columns.
  static Poset infinite_grid(std::uint32_t rows) {
    Poset p;
    p.kind_ = PosetKind::InfiniteGrid;
    p.rows_ = rows;
    return p;
  }

  // Finite partial injections {0..from-1} -> {0..to-1}.
  static Poset collapse(std::uint32_t from, std::uint32_t to) {
    Poset p;
    p.kind_ = PosetKind::Collapse;
    p.rows_ = from;
    p.cols_ = to;
    return p;
  }

  static Poset explicit_order(std::size_t n, const std::set<std::pair<std::size_t, std::size_t>>& le_pairs) {
    Poset p;
    p.kind_ = PosetKind::Explicit;
    p.le_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) p.le_[i][i] = true;
    for (const auto& [i, j] : le_pairs) {
      if (i >= n || j >= n) throw Error("explicit poset: index out of range");
      p.le_[i][j] = true;
    }
    // transitive closure, then validate antisymmetry ("p <= q <= p implies p = q")
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (p.le_[i][k] && p.le_[k][j]) p.le_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && p.le_[i][j] && p.le_[j][i])
          throw Error("explicit poset: order collapses elements " + std::to_string(i) + " and " +
                      std::to_string(j));
    return p;
  }

  PosetKind kind() const { return kind_; }
  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  bool finite() const { return kind_ != PosetKind::InfiniteGrid; }

  static Condition explicit_element(std::size_t i) {
    Condition c;
    c.set(Cell{0, 0}, static_cast<std::uint32_t>(i));
    return c;
  }

  std::size_t explicit_index(const Condition& c) const {
    auto v = c.at(Cell{0, 0});
    if (!v || c.size() != 1 || *v >= le_.size()) throw Error("explicit poset: bad element");
    return *v;
  }

  bool valid(const Condition& c) const {
    switch (kind_) {
      case PosetKind::FiniteGrid:
        for (const auto& [cell, v] : c.cells())
          if (cell.row >= rows_ || cell.col >= cols_ || v > 1) return false;
        return true;
      case PosetKind::InfiniteGrid:
        for (const auto& [cell, v] : c.cells())
          if (cell.row >= rows_ || v > 1) return false;
        return true;
      case PosetKind::Collapse: {
        std::set<std::uint32_t> used;
        for (const auto& [cell, v] : c.cells()) {
          if (cell.col != 0 || cell.row >= rows_ || v >= cols_) return false;
          if (!used.insert(v).second) return false;  // injectivity
        }
        return true;
      }
      case PosetKind::Explicit: {
        auto v = c.at(Cell{0, 0});
        return v && c.size() == 1 && *v < le_.size();
      }
    }
    return false;
  }

  // p <= q : q extends p.
  bool leq(const Condition& p, const Condition& q) const {
    if (kind_ == PosetKind::Explicit) return le_[explicit_index(p)][explicit_index(q)];
    return p.subset_of(q);
  }

  // Compatibility witness: the least upper bound for functional kinds, any
  // common extension for explicit kinds.
  std::optional<Condition> join(const Condition& p, const Condition& q) const {
    if (kind_ == PosetKind::Explicit) {
      for (std::size_t r = 0; r < le_.size(); ++r) {
        Condition cr = explicit_element(r);
        if (leq(p, cr) && leq(q, cr)) return cr;
      }
      return std::nullopt;
    }
    Condition u = p;
    for (const auto& [cell, v] : q.cells()) {
      auto w = u.at(cell);
      if (w && *w != v) return std::nullopt;
      u.set(cell, v);
    }
    if (!valid(u)) return std::nullopt;  // collapse-kind injectivity clash
    return u;
  }

  bool compatible(const Condition& p, const Condition& q) const { return join(p, q).has_value(); }

  Condition root() const {
    if (kind_ == PosetKind::Explicit) {
      // least elements need not exist; use index 0 by convention only if it
      // is below everything, otherwise reject
      for (std::size_t i = 0; i < le_.size(); ++i) {
        bool below_all = true;
        for (std::size_t j = 0; j < le_.size(); ++j) below_all = below_all && le_[i][j];
        if (below_all) return explicit_element(i);
      }
      throw Error("explicit poset: no root element");
    }
    return Condition();
  }

  std::vector<Condition> all_conditions() const {
    switch (kind_) {
      case PosetKind::FiniteGrid: {
        std::vector<Condition> out;
        std::size_t n = std::size_t(rows_) * cols_;
        std::vector<std::uint32_t> state(n, 0);  // 0 unset, 1 -> 0, 2 -> 1
        while (true) {
          Condition c;
          for (std::size_t i = 0; i < n; ++i)
            if (state[i]) c.set(Cell{std::uint32_t(i / cols_), std::uint32_t(i % cols_)}, state[i] - 1);
          out.push_back(std::move(c));
          std::size_t k = 0;
          for (; k < n; ++k) {
            if (++state[k] <= 2) break;
            state[k] = 0;
          }
          if (k == n) break;
        }
        std::sort(out.begin(), out.end());
        return out;
      }
      case PosetKind::Collapse: {
        std::vector<Condition> out;
        std::function<void(std::uint32_t, Condition&)> rec = [&](std::uint32_t a, Condition& acc) {
          if (a == rows_) {
            out.push_back(acc);
            return;
          }
          rec(a + 1, acc);  // a unmapped
          for (std::uint32_t b = 0; b < cols_; ++b) {
            Condition next = acc;
            next.set(Cell{a, 0}, b);
            if (valid(next)) rec(a + 1, next);
          }
        };
        Condition empty;
        rec(0, empty);
        std::sort(out.begin(), out.end());
        return out;
      }
      case PosetKind::Explicit: {
        std::vector<Condition> out;
        for (std::size_t i = 0; i < le_.size(); ++i) out.push_back(explicit_element(i));
        return out;
      }
      case PosetKind::InfiniteGrid:
        throw Error("all_conditions: poset is infinite");
    }
    throw Error("all_conditions: unreachable");
  }

  std::vector<Condition> extensions_of(const Condition& p) const {
    std::vector<Condition> out;
    for (const auto& q : all_conditions())
      if (leq(p, q)) out.push_back(q);
    return out;
  }

  std::vector<Condition> maximal_elements() const {
    std::vector<Condition> out;
    std::vector<Condition> all = all_conditions();
    for (const auto& p : all) {
      bool maximal = true;
      for (const auto& q : all)
        if (!(q == p) && leq(p, q)) {
          maximal = false;
          break;
        }
      if (maximal) out.push_back(p);
    }
    return out;
  }

  // Downward closure of a condition within the poset.
  std::vector<Condition> below(const Condition& m) const {
    if (kind_ == PosetKind::Explicit) {
      std::vector<Condition> out;
      std::size_t mi = explicit_index(m);
      for (std::size_t i = 0; i < le_.size(); ++i)
        if (le_[i][mi]) out.push_back(explicit_element(i));
      return out;
    }
    // subsets of m's graph that remain valid conditions
    std::vector<std::pair<Cell, std::uint32_t>> entries(m.cells().begin(), m.cells().end());
    std::vector<Condition> out;
    std::size_t n = entries.size();
    if (n > 24) throw Error("below: condition too large to enumerate");
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      Condition c;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t(1) << i)) c.set(entries[i].first, entries[i].second);
      if (valid(c)) out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  PosetKind kind_ = PosetKind::FiniteGrid;
  std::uint32_t rows_ = 0, cols_ = 0;
  std::vector<std::vector<bool>> le_;
};

// ---------------------------------------------------------------------------
// Ideals.

// Either an explicit downward-closed set of conditions, or the downward
// closure of a finite increasing chain p0 <= p1 <= ... (membership means
// "below some chain element").
class Ideal {
 public:
  static Ideal explicit_set(std::vector<Condition> elements) {
    Ideal g;
    g.elements_ = std::move(elements);
    std::sort(g.elements_.begin(), g.elements_.end());
    g.elements_.erase(std::unique(g.elements_.begin(), g.elements_.end()), g.elements_.end());
    g.is_chain_ = false;
    return g;
  }

  static Ideal from_chain(std::vector<Condition> chain, const Poset& p) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      if (!p.leq(chain[i], chain[i + 1])) throw Error("ideal: generators do not form a chain");
    Ideal g;
    g.chain_ = std::move(chain);
    g.is_chain_ = true;
    return g;
  }

  static Ideal principal(const Condition& m, const Poset& p) {
    return explicit_set(p.below(m));
  }

  bool is_chain_representation() const { return is_chain_; }
  const std::vector<Condition>& chain() const { return chain_; }
  const std::vector<Condition>& elements() const { return elements_; }

  bool contains(const Condition& c, const Poset& p) const {
    if (is_chain_) {
      for (const auto& g : chain_)
        if (p.leq(c, g)) return true;
      return false;
    }
    return std::binary_search(elements_.begin(), elements_.end(), c);
  }

  // The union of the ideal's conditions, restricted to chain generators for
  // chain ideals (where it equals the top generator).
  Condition union_condition(const Poset& p) const {
    Condition u;
    const std::vector<Condition>& src = is_chain_ ? chain_ : elements_;
    for (const auto& c : src) {
      auto j = p.join(u, c);
      if (!j) throw Error("ideal: elements are not pairwise compatible");
      u = *j;
    }
    return u;
  }

 private:
  std::vector<Condition> elements_;
  std::vector<Condition> chain_;
  bool is_chain_ = false;
};

struct IdealVerdict {
  bool ok = false;
  std::string reason;
};

// The definition with the internal witness: every pair has an upper bound
// inside G, and G is downward closed.
inline IdealVerdict is_ideal(const std::vector<Condition>& g, const Poset& p) {
  std::vector<Condition> sorted = g;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& a : sorted)
    for (const auto& b : sorted) {
      bool witnessed = false;
      for (const auto& r : sorted)
        if (p.leq(a, r) && p.leq(b, r)) {
          witnessed = true;
          break;
        }
      if (!witnessed)
        return {false, "no internal upper bound for " + a.to_string() + " and " + b.to_string()};
    }
  for (const auto& q : sorted)
    for (const auto& below : p.below(q))
      if (!std::binary_search(sorted.begin(), sorted.end(), below))
        return {false, "not downward closed at " + below.to_string()};
  return {true, ""};
}

inline IdealVerdict is_maximal_ideal(const std::vector<Condition>& g, const Poset& p) {
  IdealVerdict base = is_ideal(g, p);
  if (!base.ok) return base;
  if (!p.finite()) throw Error("is_maximal_ideal: poset is infinite");
  std::vector<Condition> sorted = g;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& c : p.all_conditions()) {
    if (std::binary_search(sorted.begin(), sorted.end(), c)) continue;
    bool clashes = false;
    for (const auto& q : sorted)
      if (!p.compatible(c, q)) {
        clashes = true;
        break;
      }
    if (!clashes) return {false, c.to_string() + " could still join the ideal"};
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Dense sets.

// A dense-set specification: a membership test plus an extension finder that
// must return some r >= q lying in the set.
struct DenseSpec {
  std::string name;
  std::function<bool(const Poset&, const Condition&)> contains;
  std::function<std::optional<Condition>(const Poset&, const Condition&)> extend_into;
};

using DenseFamily = std::vector<DenseSpec>;

struct DensityVerdict {
  bool dense = false;
  bool exhaustive = false;  // finite poset fully checked vs. finder spot check
  std::optional<Condition> stuck;  // a condition with no extension into D
  std::size_t samples = 0;
};

// Exhaustive on finite posets; on infinite posets the finder is spot-checked
// on a deterministic sample of conditions.
inline DensityVerdict is_dense(const DenseSpec& d, const Poset& p, std::size_t sample_budget = 64) {
  DensityVerdict v;
  if (p.finite()) {
    v.exhaustive = true;
    std::vector<Condition> all = p.all_conditions();
    for (const auto& q : all) {
      bool reached = false;
      for (const auto& r : all)
        if (p.leq(q, r) && d.contains(p, r)) {
          reached = true;
          break;
        }
      if (!reached) {
        v.dense = false;
        v.stuck = q;
        return v;
      }
    }
    v.dense = true;
    return v;
  }
  // deterministic sample: conditions filling small windows of the grid
  std::uint64_t rng = 0x9e3779b97f4a7c15ull;
  auto next = [&rng]() {
    rng ^= rng << 13;
    rng ^= rng >> 7;
    rng ^= rng << 17;
    return rng;
  };
  for (std::size_t s = 0; s < sample_budget; ++s) {
    Condition q;
    std::size_t cells = p.rows() > 0 ? next() % 5 : 0;
    for (std::size_t i = 0; i < cells; ++i)
      q.set(Cell{std::uint32_t(next() % p.rows()), std::uint32_t(next() % 8)}, std::uint32_t(next() % 2));
    auto r = d.extend_into(p, q);
    ++v.samples;
    if (!r || !p.leq(q, *r) || !d.contains(p, *r)) {
      v.dense = false;
      v.stuck = q;
      return v;
    }
  }
  v.dense = true;
  return v;
}

// Runs the enumeration construction: a chain through the listed dense sets,
// starting at the seed. Validates every finder answer.
inline Ideal construct_generic(const Poset& p, const DenseFamily& family, const Condition& seed) {
  if (!p.valid(seed)) throw Error("construct_generic: seed is not a condition");
  std::vector<Condition> chain{seed};
  Condition cur = seed;
  for (const auto& d : family) {
    if (d.contains(p, cur)) {
      chain.push_back(cur);
      continue;
    }
    auto r = d.extend_into(p, cur);
    if (!r) throw Error("construct_generic: finder failed for dense set '" + d.name + "'");
    if (!p.leq(cur, *r) || !d.contains(p, *r) || !p.valid(*r))
      throw Error("construct_generic: finder returned a bad extension for '" + d.name + "'");
    cur = *r;
    chain.push_back(cur);
  }
  return Ideal::from_chain(std::move(chain), p);
}

// ---------------------------------------------------------------------------
// Atoms and separativity.

struct AtomReport {
  bool separative = true;
  bool atomless = false;
  std::vector<Condition> atoms;
  std::string note;
};

inline AtomReport separative_and_atoms(const Poset& p) {
  AtomReport rep;
  switch (p.kind()) {
    case PosetKind::InfiniteGrid:
      // any condition extends to two clashing extensions on a fresh column
      rep.atomless = p.rows() > 0;
      rep.note = "atomless: every condition splits on a fresh column";
      return rep;
    case PosetKind::Explicit: {
      // construction already validated antisymmetry
      std::vector<Condition> all = p.all_conditions();
      for (const auto& c : all) {
        bool atom = true;
        for (const auto& q : all)
          for (const auto& r : all)
            if (p.leq(c, q) && p.leq(c, r) && !p.compatible(q, r)) atom = false;
        if (atom) rep.atoms.push_back(c);
      }
      rep.atomless = rep.atoms.empty();
      return rep;
    }
    default: {
      std::vector<Condition> all = p.all_conditions();
      for (const auto& c : all) {
        bool atom = true;
        for (const auto& q : all) {
          if (!p.leq(c, q)) continue;
          for (const auto& r : all)
            if (p.leq(c, r) && !p.compatible(q, r)) {
              atom = false;
              break;
            }
          if (!atom) break;
        }
        if (atom) rep.atoms.push_back(c);
      }
      rep.atomless = rep.atoms.empty();
      return rep;
    }
  }
}

// ---------------------------------------------------------------------------
// "G avoids any fixed ground collection H": the dense set of conditions
// incompatible with some member of H.

inline DenseSpec incompatibility_dense_set(const std::vector<Condition>& h) {
  DenseSpec d;
  d.name = "incompatible-with-ground-collection";
  d.contains = [h](const Poset& p, const Condition& c) {
    for (const auto& q : h)
      if (!p.compatible(c, q)) return true;
    return false;
  };
  d.extend_into = [h](const Poset& p, const Condition& c) -> std::optional<Condition> {
    for (const auto& q : h) {
      if (!p.compatible(c, q)) return c;
      // flip a value of q outside c's domain
      for (const auto& [cell, v] : q.cells()) {
        if (c.at(cell)) continue;
        Condition r = c;
        r.set(cell, v == 0 ? 1 : 0);
        if (p.valid(r)) return r;
      }
    }
    return std::nullopt;
  };
  return d;
}

struct GroundAvoidance {
  bool holds = false;            // G meets the incompatibility set
  bool vacuous = false;          // H empty
  bool dense_above_seed = true;  // finder viability; false when some member of H is unavoidable
};

inline GroundAvoidance not_in_ground_check(const Ideal& g, const std::vector<Condition>& h,
                                           const Poset& p) {
  GroundAvoidance out;
  if (h.empty()) {
    out.vacuous = true;
    out.holds = true;
    return out;
  }
  DenseSpec d = incompatibility_dense_set(h);
  const std::vector<Condition>& src = g.is_chain_representation() ? g.chain() : g.elements();
  for (const auto& c : src)
    if (d.contains(p, c)) {
      out.holds = true;
      return out;
    }
  // diagnose: can the top of G still be extended into the set?
  Condition top = g.union_condition(p);
  out.dense_above_seed = d.extend_into(p, top).has_value();
  return out;
}

// ---------------------------------------------------------------------------
// Finite sunflower (delta-system) finder and the compatible-pair argument.

struct DeltaSystem {
  std::set<std::uint32_t> root;
  std::vector<std::size_t> members;  // indices into the input family
};

namespace detail {

inline bool petals_disjoint(const std::set<std::uint32_t>& a, const std::set<std::uint32_t>& b,
                            const std::set<std::uint32_t>& root) {
  for (auto x : a) {
    if (root.count(x)) continue;
    if (b.count(x)) return false;
  }
  return true;
}

inline bool extend_sunflower(const std::vector<std::set<std::uint32_t>>& x,
                             const std::set<std::uint32_t>& root,
                             const std::vector<std::size_t>& candidates, std::size_t start,
                             std::size_t need, std::vector<std::size_t>& chosen) {
  if (need == 0) return true;
  if (candidates.size() - start < need) return false;
  for (std::size_t i = start; i < candidates.size(); ++i) {
    std::size_t c = candidates[i];
    bool ok = true;
    for (std::size_t j : chosen)
      if (!petals_disjoint(x[c], x[j], root)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    chosen.push_back(c);
    if (extend_sunflower(x, root, candidates, i + 1, need - 1, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

// Brute-force search for a subfamily of size >= m with identical pairwise
// intersections. Candidate roots are the pairwise intersections (plus the
// empty set and, for degenerate targets, the sets themselves).
inline std::optional<DeltaSystem> find_delta_system(const std::vector<std::set<std::uint32_t>>& x,
                                                    std::size_t m) {
  if (m == 0) return DeltaSystem{};
  if (m == 1) {
    if (x.empty()) return std::nullopt;
    return DeltaSystem{x[0], {0}};
  }
  std::set<std::set<std::uint32_t>> roots;
  roots.insert({});
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      std::set<std::uint32_t> inter;
      std::set_intersection(x[i].begin(), x[i].end(), x[j].begin(), x[j].end(),
                            std::inserter(inter, inter.begin()));
      roots.insert(inter);
    }
  for (const auto& root : roots) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < x.size(); ++i) {
      bool superset = true;
      for (auto r : root)
        if (!x[i].count(r)) {
          superset = false;
          break;
        }
      if (superset) candidates.push_back(i);
    }
    if (candidates.size() < m) continue;
    std::vector<std::size_t> chosen;
    if (detail::extend_sunflower(x, root, candidates, 0, m, chosen)) {
      // verify the defining property before returning
      for (std::size_t a = 0; a < chosen.size(); ++a)
        for (std::size_t b = a + 1; b < chosen.size(); ++b) {
          std::set<std::uint32_t> inter;
          std::set_intersection(x[chosen[a]].begin(), x[chosen[a]].end(), x[chosen[b]].begin(),
                                x[chosen[b]].end(), std::inserter(inter, inter.begin()));
          if (inter != root) throw Error("find_delta_system: internal verification failed");
        }
      return DeltaSystem{root, chosen};
    }
  }
  return std::nullopt;
}

// The compatible-pair argument behind the chain-condition proof: find a
// sunflower among the domains, then pigeonhole the root restrictions; two
// conditions agreeing on the shared root agree on their whole common domain.
// Falls back to an exhaustive pair scan; returns nothing for a genuine
// antichain.
inline std::optional<std::pair<Condition, Condition>> find_compatible_pair(
    const std::vector<Condition>& s, const Poset& p) {
  auto cell_key = [](const Cell& c) { return (std::uint64_t(c.row) << 20) | c.col; };
  std::map<std::set<std::uint32_t>, std::size_t> domain_of;  // encoded domain -> representative
  std::vector<std::set<std::uint32_t>> domains;
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::set<std::uint32_t> d;
    for (const auto& [cell, v] : s[i].cells()) d.insert(std::uint32_t(cell_key(cell)));
    if (domain_of.emplace(d, i).second) {
      domains.push_back(std::move(d));
      reps.push_back(i);
    }
  }
  // try sunflowers of decreasing size, pigeonholing the root restrictions
  for (std::size_t want = domains.size(); want >= 3; --want) {
    auto ds = find_delta_system(domains, want);
    if (!ds) continue;
    std::map<std::vector<std::pair<Cell, std::uint32_t>>, std::size_t> by_restriction;
    for (std::size_t di : ds->members) {
      const Condition& cand = s[reps[di]];
      std::vector<std::pair<Cell, std::uint32_t>> restriction;
      for (const auto& [cell, v] : cand.cells())
        if (ds->root.count(std::uint32_t(cell_key(cell)))) restriction.emplace_back(cell, v);
      auto [it, fresh] = by_restriction.emplace(restriction, reps[di]);
      if (!fresh) {
        const Condition& a = s[it->second];
        const Condition& b = cand;
        if (p.compatible(a, b) && !(a == b)) return std::make_pair(a, b);
      }
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (p.compatible(s[i], s[j])) return std::make_pair(s[i], s[j]);
  return std::nullopt;
}

// Chain-union predicate for collapse-style posets: the union of an
// explicitly given finite chain is itself a condition.
inline std::optional<Condition> omega_closed_chain_union(const Poset& p,
                                                         const std::vector<Condition>& chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!p.leq(chain[i], chain[i + 1])) throw Error("omega_closed_chain_union: not a chain");
  Condition u;
  for (const auto& c : chain) {
    auto j = p.join(u, c);
    if (!j) return std::nullopt;
    u = *j;
  }
  if (!p.valid(u)) return std::nullopt;
  return u;
}

}  // namespace forcelab

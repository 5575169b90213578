#pragma once

// Hierarchical names over a forcing poset: rank, the saturation convention,
// evaluation under an ideal, canonical names, the name that evaluates to the
// ideal itself, bounded name universes and their evaluated structures.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"
#include "forcelab/forcing.hpp"
#include "forcelab/hf.hpp"
#include "forcelab/logic.hpp"

namespace forcelab {

// A finite set of (name, condition) pairs, stored canonically (sorted,
// duplicate-free) so structural equality is decidable and cheap. Name rank
// strictly decreases into members, which grounds every recursion here.
class PName {
 public:
  using Pair = std::pair<PName, Condition>;

  PName() = default;  // the empty name

  static PName make(std::vector<Pair> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return pair_cmp(a, b) < 0; });
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const Pair& a, const Pair& b) { return pair_cmp(a, b) == 0; }),
                pairs.end());
    PName n;
    if (!pairs.empty()) {
      std::uint32_t r = 0;
      for (const Pair& pr : pairs) r = std::max(r, pr.first.rank_ + 1);
      n.rank_ = r;
      n.pairs_ = std::make_shared<const std::vector<Pair>>(std::move(pairs));
    }
    return n;
  }

  const std::vector<Pair>& pairs() const {
    static const std::vector<Pair> none;
    return pairs_ ? *pairs_ : none;
  }

  bool empty() const { return !pairs_ || pairs_->empty(); }
  std::uint32_t rank() const { return rank_; }

  static int cmp(const PName& a, const PName& b) {
    if (a.pairs_ == b.pairs_) return 0;
    if (a.rank_ != b.rank_) return a.rank_ < b.rank_ ? -1 : 1;
    const auto& xs = a.pairs();
    const auto& ys = b.pairs();
    std::size_t n = std::min(xs.size(), ys.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = pair_cmp(xs[i], ys[i]);
      if (c != 0) return c;
    }
    if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
    return 0;
  }

  bool operator==(const PName& o) const { return cmp(*this, o) == 0; }
  bool operator!=(const PName& o) const { return cmp(*this, o) != 0; }
  bool operator<(const PName& o) const { return cmp(*this, o) < 0; }

 private:
  static int pair_cmp(const Pair& a, const Pair& b) {
    int c = cmp(a.first, b.first);
    if (c != 0) return c;
    if (a.second < b.second) return -1;
    if (b.second < a.second) return 1;
    return 0;
  }

  std::shared_ptr<const std::vector<Pair>> pairs_;
  std::uint32_t rank_ = 0;
};

inline std::uint32_t name_rank(const PName& t) { return t.rank(); }

// ---------------------------------------------------------------------------
// Saturation: whenever (s, p) is in the name, so is (s, q) for every q >= p,
// recursively. Evaluation under any ideal is unchanged (downward closure
// already makes the extra pairs redundant), but the forcing recursion
// assumes the saturated form.
inline PName saturate(const PName& t, const Poset& p) {
  if (!p.finite()) throw Error("saturate: poset is infinite");
  std::map<PName, PName> memo;
  struct Rec {
    const Poset& poset;
    std::map<PName, PName>& memo;
    const PName& run(const PName& n) {
      auto it = memo.find(n);
      if (it != memo.end()) return it->second;
      std::vector<PName::Pair> out;
      for (const auto& [sub, cond] : n.pairs()) {
        const PName& ssub = run(sub);
        for (const auto& q : poset.extensions_of(cond)) out.emplace_back(ssub, q);
      }
      return memo.emplace(n, PName::make(std::move(out))).first->second;
    }
  } rec{p, memo};
  return rec.run(t);
}

// ---------------------------------------------------------------------------
// Evaluation: t^G = { s^G | (s, cond) in t, cond in G }, canonicalized.

inline HFSet eval_name(const PName& t, const Ideal& g, const Poset& p) {
  std::map<PName, HFSet> memo;
  struct Rec {
    const Ideal& g;
    const Poset& p;
    std::map<PName, HFSet>& memo;
    const HFSet& run(const PName& n) {
      auto it = memo.find(n);
      if (it != memo.end()) return it->second;
      std::vector<HFSet> kids;
      for (const auto& [sub, cond] : n.pairs())
        if (g.contains(cond, p)) kids.push_back(run(sub));
      return memo.emplace(n, HFSet::make(std::move(kids))).first->second;
    }
  } rec{g, p, memo};
  return rec.run(t);
}

// ---------------------------------------------------------------------------
// Canonical names: every member tagged by every condition, so the value is
// independent of the ideal.

inline PName canonical_name(const HFSet& x, const Poset& p) {
  if (!p.finite()) throw Error("canonical_name: poset is infinite");
  std::vector<Condition> all = p.all_conditions();
  std::map<HFSet, PName> memo;
  struct Rec {
    const std::vector<Condition>& all;
    std::map<HFSet, PName>& memo;
    const PName& run(const HFSet& v) {
      auto it = memo.find(v);
      if (it != memo.end()) return it->second;
      std::vector<PName::Pair> pairs;
      for (const HFSet& kid : v.children()) {
        const PName& kn = run(kid);
        for (const auto& c : all) pairs.emplace_back(kn, c);
      }
      return memo.emplace(v, PName::make(std::move(pairs))).first->second;
    }
  } rec{all, memo};
  return rec.run(x);
}

// HF encoding of a condition: the set of its (row, col, value) triples, each
// encoded as ((row, col), value) with Kuratowski pairs on von Neumann
// numerals. Lets evaluated names about the poset live inside a pure HF world.
inline HFSet encode_condition(const Condition& c) {
  std::vector<HFSet> triples;
  for (const auto& [cell, v] : c.cells())
    triples.push_back(
        encode_pair(encode_pair(von_neumann(cell.row), von_neumann(cell.col)), von_neumann(v)));
  return HFSet::make(std::move(triples));
}

// The name that evaluates to the ideal itself (as its set of encoded
// conditions).
inline PName gamma_name(const Poset& p) {
  if (!p.finite()) throw Error("gamma_name: poset is infinite");
  std::vector<PName::Pair> pairs;
  for (const auto& c : p.all_conditions()) pairs.emplace_back(canonical_name(encode_condition(c), p), c);
  return PName::make(std::move(pairs));
}

// ---------------------------------------------------------------------------
// Bounded name universes.

inline void collect_subnames(const PName& t, std::vector<PName>& out) {
  out.push_back(t);
  for (const auto& [sub, cond] : t.pairs()) collect_subnames(sub, out);
}

// A deterministic, budgeted universe: the empty name, canonical names of the
// seeds, the ideal name, the supplied extras, closed under subnames, then
// enriched with saturated single-pair names level by level up to the rank
// bound. Everything above the rank bound is dropped; exceeding the size
// budget is an error.
inline std::vector<PName> name_universe(const Poset& p, const std::vector<HFSet>& seeds,
                                        const std::vector<PName>& extras, std::uint32_t rank_bound,
                                        std::size_t budget = 200) {
  if (!p.finite()) throw Error("name_universe: poset is infinite");
  std::vector<PName> pool;
  pool.push_back(PName());
  for (const auto& x : seeds) collect_subnames(canonical_name(x, p), pool);
  collect_subnames(gamma_name(p), pool);
  for (const auto& e : extras) collect_subnames(e, pool);

  std::vector<PName> u;
  for (const auto& n : pool)
    if (n.rank() <= rank_bound) u.push_back(n);
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());

  std::vector<Condition> all = p.all_conditions();
  for (std::uint32_t level = 0; level + 1 <= rank_bound; ++level) {
    std::vector<PName> snapshot = u;
    for (const auto& n : snapshot) {
      if (n.rank() != level) continue;
      for (const auto& c : all) {
        PName single = saturate(PName::make({{n, c}}), p);
        if (single.rank() <= rank_bound) u.push_back(single);
      }
    }
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() > budget)
      throw Error("name_universe: budget exceeded (" + std::to_string(u.size()) + " names)");
  }
  if (u.size() > budget)
    throw Error("name_universe: budget exceeded (" + std::to_string(u.size()) + " names)");
  return u;
}

// ---------------------------------------------------------------------------
// The evaluated structure of a universe under an ideal.

struct MGUniverse {
  Structure structure;
  std::vector<HFSet> node_values;            // per structure node, same order
  std::vector<std::size_t> name_to_node;     // universe index -> node index
  std::vector<std::string> node_ids;
};

inline MGUniverse mg_universe(const std::vector<PName>& universe, const Ideal& g, const Poset& p) {
  MGUniverse out;
  std::vector<HFSet> evals;
  std::map<PName, HFSet> memo;
  struct Rec {
    const Ideal& g;
    const Poset& p;
    std::map<PName, HFSet>& memo;
    const HFSet& run(const PName& n) {
      auto it = memo.find(n);
      if (it != memo.end()) return it->second;
      std::vector<HFSet> kids;
      for (const auto& [sub, cond] : n.pairs())
        if (g.contains(cond, p)) kids.push_back(run(sub));
      return memo.emplace(n, HFSet::make(std::move(kids))).first->second;
    }
  } rec{g, p, memo};
  evals.reserve(universe.size());
  for (const auto& n : universe) evals.push_back(rec.run(n));

  std::vector<HFSet> distinct = evals;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  for (std::size_t i = 0; i < distinct.size(); ++i) {
    std::string id = "n" + std::to_string(i);
    out.structure.nodes.push_back(id);
    out.structure.labels.emplace(id, distinct[i]);
    out.node_ids.push_back(id);
    out.node_values.push_back(distinct[i]);
  }
  for (std::size_t i = 0; i < distinct.size(); ++i)
    for (std::size_t j = 0; j < distinct.size(); ++j)
      if (distinct[j].contains(distinct[i]))
        out.structure.edges.insert({out.node_ids[i], out.node_ids[j]});
  for (const auto& e : evals) {
    auto it = std::lower_bound(distinct.begin(), distinct.end(), e);
    out.name_to_node.push_back(std::size_t(it - distinct.begin()));
  }
  return out;
}

}  // namespace forcelab

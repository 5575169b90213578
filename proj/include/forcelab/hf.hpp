#pragma once

// Canonical hereditarily finite sets: the value domain for finite membership
// structures, Mostowski collapses and name evaluations.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"

namespace forcelab {

// Immutable, extensionally canonical finite set. Children are stored
// duplicate-free in a fixed total order (rank first, then lexicographic on
// the ordered child lists), so structural equality coincides with
// extensional equality and serialization is deterministic.
class HFSet {
 public:
  HFSet() = default;  // the empty set

  static HFSet make(std::vector<HFSet> kids) {
    std::sort(kids.begin(), kids.end(), [](const HFSet& a, const HFSet& b) { return cmp(a, b) < 0; });
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    HFSet s;
    if (!kids.empty()) {
      int r = 0;
      std::size_t h = 0xcbf29ce484222325ull;
      for (const HFSet& k : kids) {
        r = std::max(r, k.rank_ + 1);
        h = (h ^ k.hash_) * 0x100000001b3ull;
      }
      s.rank_ = r;
      s.hash_ = h ^ (kids.size() << 1);
      s.kids_ = std::make_shared<const std::vector<HFSet>>(std::move(kids));
    }
    return s;
  }

  const std::vector<HFSet>& children() const {
    static const std::vector<HFSet> none;
    return kids_ ? *kids_ : none;
  }

  bool empty() const { return !kids_ || kids_->empty(); }
  std::size_t size() const { return kids_ ? kids_->size() : 0; }
  int rank() const { return rank_; }
  std::size_t hash() const { return hash_; }

  // Total order: by rank, then lexicographically on the ordered child lists.
  static int cmp(const HFSet& a, const HFSet& b) {
    if (a.kids_ == b.kids_) return 0;
    if (a.rank_ != b.rank_) return a.rank_ < b.rank_ ? -1 : 1;
    const auto& xs = a.children();
    const auto& ys = b.children();
    std::size_t n = std::min(xs.size(), ys.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = cmp(xs[i], ys[i]);
      if (c != 0) return c;
    }
    if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
    return 0;
  }

  bool operator==(const HFSet& o) const { return cmp(*this, o) == 0; }
  bool operator!=(const HFSet& o) const { return cmp(*this, o) != 0; }
  bool operator<(const HFSet& o) const { return cmp(*this, o) < 0; }

  bool contains(const HFSet& x) const {
    const auto& ks = children();
    auto it = std::lower_bound(ks.begin(), ks.end(), x);
    return it != ks.end() && *it == x;
  }

  std::string to_string() const {
    std::string out;
    print(out);
    return out;
  }

  static HFSet parse(std::string_view text) {
    std::size_t pos = 0;
    HFSet s = parse_at(text, pos);
    skip_ws(text, pos);
    if (pos != text.size()) throw ParseError("trailing input after set literal", pos);
    return s;
  }

 private:
  void print(std::string& out) const {
    out += '{';
    const auto& ks = children();
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (i) out += ',';
      ks[i].print(out);
    }
    out += '}';
  }

  static void skip_ws(std::string_view t, std::size_t& pos) {
    while (pos < t.size() && (t[pos] == ' ' || t[pos] == '\t' || t[pos] == '\n' || t[pos] == '\r')) ++pos;
  }

  static HFSet parse_at(std::string_view t, std::size_t& pos) {
    skip_ws(t, pos);
    if (pos >= t.size() || t[pos] != '{') throw ParseError("expected '{'", pos);
    ++pos;
    std::vector<HFSet> kids;
    skip_ws(t, pos);
    if (pos < t.size() && t[pos] == '}') {
      ++pos;
      return HFSet();
    }
    while (true) {
      kids.push_back(parse_at(t, pos));
      skip_ws(t, pos);
      if (pos >= t.size()) throw ParseError("unterminated set literal", pos);
      if (t[pos] == ',') {
        ++pos;
        continue;
      }
      if (t[pos] == '}') {
        ++pos;
        return make(std::move(kids));
      }
      throw ParseError("expected ',' or '}'", pos);
    }
  }

  std::shared_ptr<const std::vector<HFSet>> kids_;
  int rank_ = 0;
  std::size_t hash_ = 0xcbf29ce484222325ull;
};

struct HFSetHash {
  std::size_t operator()(const HFSet& s) const { return s.hash(); }
};

// Duplicate-collapsing constructor; two literals with the same extension
// canonicalize to the identical value.
inline HFSet canonicalize(std::vector<HFSet> kids) { return HFSet::make(std::move(kids)); }

inline int rank(const HFSet& x) { return x.rank(); }

inline HFSet von_neumann(unsigned n) {
  std::vector<HFSet> below;
  HFSet cur;
  for (unsigned i = 0; i < n; ++i) {
    below.push_back(cur);
    cur = HFSet::make(below);
  }
  return cur;
}

// V_0, V_1, ... V_n as an enumerated stage; n is capped because |V_6| = 2^65536.
inline std::vector<HFSet> v_stage(unsigned n) {
  if (n > 5) throw Error("v_stage: stage " + std::to_string(n) + " too large (cap is 5)");
  std::vector<HFSet> stage;  // V_0 = empty
  for (unsigned step = 0; step < n; ++step) {
    std::vector<HFSet> next;
    std::size_t m = stage.size();
    next.reserve(std::size_t(1) << m);
    for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
      std::vector<HFSet> kids;
      for (std::size_t i = 0; i < m; ++i)
        if (mask & (std::size_t(1) << i)) kids.push_back(stage[i]);
      next.push_back(HFSet::make(std::move(kids)));
    }
    std::sort(next.begin(), next.end());
    stage = std::move(next);
  }
  return stage;
}

// Least transitive superset of x's members (x itself excluded).
inline std::vector<HFSet> transitive_closure(const HFSet& x) {
  std::vector<HFSet> acc;
  std::vector<HFSet> todo(x.children().begin(), x.children().end());
  while (!todo.empty()) {
    HFSet y = todo.back();
    todo.pop_back();
    auto it = std::lower_bound(acc.begin(), acc.end(), y);
    if (it != acc.end() && *it == y) continue;
    acc.insert(it, y);
    for (const HFSet& z : y.children()) todo.push_back(z);
  }
  return acc;
}

inline bool is_transitive(const std::vector<HFSet>& collection) {
  std::vector<HFSet> sorted = collection;
  std::sort(sorted.begin(), sorted.end());
  for (const HFSet& x : sorted)
    for (const HFSet& y : x.children()) {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), y);
      if (it == sorted.end() || !(*it == y)) return false;
    }
  return true;
}

inline bool is_transitive(const HFSet& x) { return is_transitive(x.children()); }

// Kuratowski pair {{x},{x,y}}.
inline HFSet encode_pair(const HFSet& x, const HFSet& y) {
  return HFSet::make({HFSet::make({x}), HFSet::make({x, y})});
}

inline std::pair<HFSet, HFSet> decode_pair(const HFSet& p) {
  const auto& ks = p.children();
  if (ks.size() == 1 && ks[0].size() == 1) return {ks[0].children()[0], ks[0].children()[0]};
  if (ks.size() == 2) {
    const HFSet* single = nullptr;
    const HFSet* pair = nullptr;
    for (const HFSet& k : ks) {
      if (k.size() == 1 && !single)
        single = &k;
      else if (k.size() == 2 && !pair)
        pair = &k;
    }
    if (single && pair) {
      const HFSet& x = single->children()[0];
      if (pair->contains(x)) {
        const auto& two = pair->children();
        const HFSet& y = two[0] == x ? two[1] : two[0];
        if (encode_pair(x, y) == p) return {x, y};
      }
    }
  }
  throw Error("decode_pair: not a Kuratowski pair: " + p.to_string());
}

}  // namespace forcelab

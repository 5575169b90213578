#include <catch2/catch_amalgamated.hpp>

#include "forcelab/hf.hpp"

using namespace forcelab;

namespace {

// Independent rank oracle: unrolls the definition with no caching.
int rank_oracle(const HFSet& x) {
  int r = 0;
  for (const auto& k : x.children()) r = std::max(r, rank_oracle(k) + 1);
  return r;
}

}  // namespace

TEST_CASE("canonicalization collapses duplicates and ignores order") {
  HFSet empty;
  CHECK(canonicalize({empty, empty}) == canonicalize({empty}));
  HFSet one = HFSet::make({empty});
  CHECK(canonicalize({one, empty}) == canonicalize({empty, one}));
  CHECK(canonicalize({HFSet(), von_neumann(1), von_neumann(2)}) == von_neumann(3));
}

TEST_CASE("rank follows the recursive definition") {
  CHECK(HFSet().rank() == 0);
  CHECK(von_neumann(3).rank() == 3);
  CHECK(HFSet::make({HFSet::make({HFSet()})}).rank() == 2);
  for (const auto& x : v_stage(4)) CHECK(x.rank() == rank_oracle(x));
}

TEST_CASE("v_stage sizes and membership caps") {
  CHECK(v_stage(0).empty());
  CHECK(v_stage(1).size() == 1);
  CHECK(v_stage(2).size() == 2);
  CHECK(v_stage(3).size() == 4);
  CHECK(v_stage(4).size() == 16);
  CHECK(v_stage(5).size() == 65536);
  CHECK_THROWS_AS(v_stage(6), Error);

  auto v2 = v_stage(2);
  CHECK(v2[0] == HFSet());
  CHECK(v2[1] == von_neumann(1));

  // cumulative: V_n is contained in V_{n+1}
  auto v3 = v_stage(3);
  auto v4 = v_stage(4);
  for (const auto& x : v3) CHECK(std::binary_search(v4.begin(), v4.end(), x));

  // rank bound: rank(x) < n for x in V_n
  for (const auto& x : v4) CHECK(x.rank() < 4);
}

TEST_CASE("von Neumann numerals") {
  CHECK(von_neumann(0) == HFSet());
  CHECK(von_neumann(1) == HFSet::make({HFSet()}));
  HFSet zero, one = HFSet::make({zero});
  HFSet two = HFSet::make({zero, one});
  CHECK(von_neumann(3) == HFSet::make({zero, one, two}));
  for (unsigned k = 0; k <= 6; ++k) {
    CHECK(is_transitive(von_neumann(k)));
    if (k <= 4) CHECK(std::binary_search(v_stage(5).begin(), v_stage(5).end(), von_neumann(k)));
  }
}

TEST_CASE("transitivity checks") {
  CHECK_FALSE(is_transitive(HFSet::make({von_neumann(1)})));  // {1}: 0 in 1 but 0 not a member
  auto tc = transitive_closure(HFSet::make({HFSet::make({HFSet()})}));
  REQUIRE(tc.size() == 2);
  CHECK(tc[0] == HFSet());
  CHECK(tc[1] == HFSet::make({HFSet()}));
  std::vector<HFSet> coll{von_neumann(2), von_neumann(1), HFSet()};
  CHECK(is_transitive(coll));
}

TEST_CASE("extensionality of the canonical form over V_4") {
  auto v4 = v_stage(4);
  for (const auto& x : v4)
    for (const auto& y : v4) {
      bool same_children = x.children() == y.children();
      CHECK(same_children == (x == y));
    }
}

TEST_CASE("Kuratowski pairs") {
  HFSet zero, one = von_neumann(1);
  CHECK(encode_pair(zero, zero) == HFSet::make({HFSet::make({zero})}));
  CHECK(encode_pair(zero, one) != encode_pair(one, zero));

  // decode is a left inverse, exhaustively over V_4 x V_4
  auto v4 = v_stage(4);
  for (const auto& x : v4)
    for (const auto& y : v4) {
      auto [a, b] = decode_pair(encode_pair(x, y));
      CHECK(a == x);
      CHECK(b == y);
    }

  // pair injectivity over V_3 x V_3
  auto v3 = v_stage(3);
  std::vector<HFSet> encodings;
  for (const auto& x : v3)
    for (const auto& y : v3) encodings.push_back(encode_pair(x, y));
  std::sort(encodings.begin(), encodings.end());
  CHECK(std::adjacent_find(encodings.begin(), encodings.end()) == encodings.end());

  CHECK_THROWS_AS(decode_pair(von_neumann(3)), Error);
}

TEST_CASE("text round-trip") {
  CHECK(HFSet().to_string() == "{}");
  CHECK(HFSet::parse("{{},{{}}}") == von_neumann(2));
  CHECK(HFSet::parse("{ { } , { } }") == von_neumann(1));  // duplicates collapse
  for (const auto& x : v_stage(4)) CHECK(HFSet::parse(x.to_string()) == x);
  CHECK_THROWS_AS(HFSet::parse("{"), ParseError);
  CHECK_THROWS_AS(HFSet::parse("{}{}"), ParseError);
}

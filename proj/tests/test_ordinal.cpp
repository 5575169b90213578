#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "forcelab/ordinal.hpp"

using namespace forcelab;

namespace {

const Ordinal W = Ordinal::omega();

// Closed-form oracle for ordinals below w^3, written as coefficient triples
// (c2, c1, c0) for w^2*c2 + w*c1 + c0. The two operations follow directly
// from the transfinite recursion:
//   x + y drops x's part below y's leading power and adds leading coefficients;
//   x * y distributes on the left over y's powers, with x*w collapsing x's
//   finite tail.
struct Triple {
  unsigned long long c2 = 0, c1 = 0, c0 = 0;
  bool operator==(const Triple&) const = default;
};

Triple oracle_add(Triple x, Triple y) {
  if (y.c2 > 0) return {x.c2 + y.c2, y.c1, y.c0};
  if (y.c1 > 0) return {x.c2, x.c1 + y.c1, y.c0};
  if (y.c0 > 0) return {x.c2, x.c1, x.c0 + y.c0};
  return x;
}

// Inputs restricted to pairs (c2 = 0); products stay below w^3.
Triple oracle_mul(Triple x, Triple y) {
  if ((x.c1 | x.c0) == 0 || (y.c1 | y.c0) == 0) return {};
  Triple acc{};
  if (y.c1 > 0) {
    // x * w*c1: the finite tail of x collapses; a leading w term lifts to w^2
    Triple part = x.c1 > 0 ? Triple{y.c1, 0, 0} : Triple{0, y.c1, 0};
    acc = oracle_add(acc, part);
  }
  if (y.c0 > 0) {
    // x * c0: leading coefficient scales, the tail of x is appended once
    Triple part = x.c1 > 0 ? Triple{0, x.c1 * y.c0, x.c0} : Triple{0, 0, x.c0 * y.c0};
    acc = oracle_add(acc, part);
  }
  return acc;
}

Ordinal of_triple(const Triple& t) {
  Ordinal o = Ordinal::finite(t.c0);
  o = ord_add(Ordinal::omega_pow(Ordinal(1ULL), t.c1), o);
  o = ord_add(Ordinal::omega_pow(Ordinal(2ULL), t.c2), o);
  return o;
}

Ordinal random_ordinal(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_int_distribution<unsigned long long> coeff(1, 5);
  Ordinal acc;
  int n = coin(rng);
  for (int i = 0; i <= n; ++i) {
    Ordinal e = depth > 0 && coin(rng) > 1 ? random_ordinal(rng, depth - 1) : Ordinal(coin(rng));
    acc = ord_add(acc, Ordinal::omega_pow(e, coeff(rng)));
  }
  return acc;
}

}  // namespace

TEST_CASE("comparison is the lexicographic CNF order") {
  CHECK(Ordinal::cmp(W, ord_add(W, Ordinal(1ULL))) < 0);
  CHECK(Ordinal(2022ULL) < W);
  CHECK(ord_pow(W, Ordinal(2ULL)) > ord_mul(W, Ordinal(3ULL)));
  CHECK(Ordinal(3ULL) < Ordinal(7ULL));
  CHECK(W == W);
}

TEST_CASE("addition identities") {
  CHECK(ord_add(Ordinal(1ULL), W) == W);
  CHECK(ord_add(W, Ordinal(1ULL)) != W);
  // (w+3) + (w*2+1) = w*3 + 1
  Ordinal lhs = ord_add(ord_add(W, Ordinal(3ULL)), ord_add(ord_mul(W, Ordinal(2ULL)), Ordinal(1ULL)));
  CHECK(lhs == ord_add(ord_mul(W, Ordinal(3ULL)), Ordinal(1ULL)));
}

TEST_CASE("multiplication identities") {
  CHECK(ord_mul(Ordinal(2ULL), W) == W);
  CHECK(ord_mul(W, Ordinal(2ULL)) == ord_add(W, W));
  CHECK(ord_mul(W, W) == ord_pow(W, Ordinal(2ULL)));
}

TEST_CASE("exponentiation") {
  CHECK(ord_pow(W, Ordinal(2ULL)) == ord_mul(W, W));
  CHECK(ord_pow(ord_add(W, Ordinal(5ULL)), Ordinal()) == Ordinal(1ULL));
  Ordinal w_to_w = ord_pow(W, W);
  for (unsigned long long n = 0; n <= 10; ++n) CHECK(w_to_w > ord_pow(W, Ordinal(n)));
  CHECK(ord_pow(Ordinal(2ULL), W) == W);
  CHECK(ord_pow(Ordinal(2ULL), Ordinal(10ULL)) == Ordinal(1024ULL));
  // depth cap trips instead of building an unrepresentable tower
  Ordinal tower = W;
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 100; ++i) tower = ord_pow(W, tower);
        return tower;
      }(),
      Error);
}

TEST_CASE("exhaustive agreement with the closed-form oracle below w*20+20") {
  std::vector<Triple> pairs;
  for (unsigned long long c1 = 0; c1 <= 20; ++c1)
    for (unsigned long long c0 = 0; c0 <= 20; ++c0) pairs.push_back({0, c1, c0});
  for (const auto& x : pairs)
    for (const auto& y : pairs) {
      REQUIRE(ord_add(of_triple(x), of_triple(y)) == of_triple(oracle_add(x, y)));
      REQUIRE(ord_mul(of_triple(x), of_triple(y)) == of_triple(oracle_mul(x, y)));
    }
}

TEST_CASE("associativity and monotonicity on random triples") {
  std::mt19937 rng(20220614);
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = random_ordinal(rng, 3), b = random_ordinal(rng, 3), c = random_ordinal(rng, 3);
    CHECK(ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c)));
    CHECK(ord_mul(ord_mul(a, b), c) == ord_mul(a, ord_mul(b, c)));
    // left distributivity
    CHECK(ord_mul(a, ord_add(b, c)) == ord_add(ord_mul(a, b), ord_mul(a, c)));
    // strict monotonicity of addition in the right argument
    if (b < c) CHECK(ord_add(a, b) < ord_add(a, c));
  }
  // right distributivity fails: (1+1)*w != 1*w + 1*w
  CHECK(ord_mul(ord_add(Ordinal(1ULL), Ordinal(1ULL)), W) !=
        ord_add(ord_mul(Ordinal(1ULL), W), ord_mul(Ordinal(1ULL), W)));
}

TEST_CASE("cofinality of CNF ordinals") {
  CHECK(cofinality(Ordinal(2022ULL)) == Cofinality::One);
  CHECK(cofinality(W) == Cofinality::Omega);
  CHECK(cofinality(ord_mul(ord_pow(W, Ordinal(2ULL)), Ordinal(5ULL))) == Cofinality::Omega);
  CHECK(cofinality(Ordinal()) == Cofinality::Zero);
}

TEST_CASE("ordinal text round-trip") {
  CHECK(to_string(parse_ordinal("w^2*3 + w*1 + 5")) == "w^2*3 + w + 5");
  CHECK(parse_ordinal("1 + w") == W);
  CHECK(to_string(parse_ordinal("w^(w+1)*2 + 7")) == "w^(w + 1)*2 + 7");
  CHECK(parse_ordinal("0") == Ordinal());
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    Ordinal o = random_ordinal(rng, 2);
    CHECK(parse_ordinal(to_string(o)) == o);
  }
  CHECK_THROWS_AS(parse_ordinal("w^"), ParseError);
}

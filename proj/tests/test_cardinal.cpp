#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "forcelab/cardinal.hpp"

using namespace forcelab;

namespace {

CardExpr aleph(unsigned long long n) { return CardExpr::aleph(Ordinal(n)); }

CardExpr random_card(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  switch (pick(rng)) {
    case 0:
      return CardExpr::finite(std::uniform_int_distribution<int>(0, 9)(rng));
    case 1:
      return aleph(std::uniform_int_distribution<int>(0, 4)(rng));
    case 2:
      return CardExpr::sum({random_card(rng, depth - 1), random_card(rng, depth - 1)});
    case 3:
      return CardExpr::prod({random_card(rng, depth - 1), random_card(rng, depth - 1)});
    case 4:
      return CardExpr::pow(random_card(rng, depth - 1), random_card(rng, depth - 1));
    default:
      return CardExpr::two_pow(random_card(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("normalization applies the choice-backed exponent laws") {
  // aleph_0 ^ aleph_0 = 2 ^ aleph_0
  CardExpr e = card_normalize(CardExpr::pow(aleph(0), aleph(0)));
  CHECK(card_eq(e, CardExpr::two_pow(aleph(0))));
  // (2^aleph_0)^aleph_0 = 2^aleph_0
  e = card_normalize(CardExpr::pow(CardExpr::two_pow(aleph(0)), aleph(0)));
  CHECK(card_eq(e, CardExpr::two_pow(aleph(0))));
  // absorption
  CHECK(card_eq(card_normalize(CardExpr::sum({aleph(3), aleph(1)})), aleph(3)));
  CHECK(card_eq(card_normalize(CardExpr::prod({aleph(2), aleph(3)})), aleph(3)));
  CHECK(card_eq(card_normalize(CardExpr::sum({aleph(1), CardExpr::finite(7)})), aleph(1)));
  // finite folding
  CHECK(card_eq(card_normalize(CardExpr::sum({CardExpr::finite(2), CardExpr::finite(3)})),
                CardExpr::finite(5)));
  CHECK(card_eq(card_normalize(CardExpr::two_pow(CardExpr::finite(10))), CardExpr::finite(1024)));
  // kappa^lambda = 2^lambda for aleph_0 <= kappa <= lambda
  CHECK(card_eq(card_normalize(CardExpr::pow(aleph(1), aleph(2))), CardExpr::two_pow(aleph(2))));
  // undecidable comparisons stay symbolic: 2^aleph_0 vs aleph_2
  CardExpr ch = card_normalize(CardExpr::sum({CardExpr::two_pow(aleph(0)), aleph(2)}));
  CHECK(ch.kind == CardKind::Sum);
  // ... but aleph_1 <= 2^aleph_0 is decidable
  CHECK(card_eq(card_normalize(CardExpr::sum({CardExpr::two_pow(aleph(0)), aleph(1)})),
                CardExpr::two_pow(aleph(0))));
}

TEST_CASE("normalization is idempotent on random expressions") {
  std::mt19937 rng(99);
  for (int i = 0; i < 500; ++i) {
    CardExpr e = random_card(rng, 3);
    CardExpr n1, n2;
    try {
      n1 = card_normalize(e);
      n2 = card_normalize(n1);
    } catch (const Error&) {
      continue;  // finite blow-up guard tripped
    }
    REQUIRE(card_eq(n1, n2));
  }
}

TEST_CASE("cardinal cofinality") {
  // cf(aleph_0) = omega, written as aleph(0)
  CHECK(card_eq(card_cofinality(Ordinal()), aleph(0)));
  // cf(aleph_omega) = omega
  CHECK(card_eq(card_cofinality(Ordinal::omega()), aleph(0)));
  // successor indices are regular
  CHECK(card_eq(card_cofinality(Ordinal(2022ULL)), aleph(2022)));
  CHECK(card_eq(card_cofinality(ord_add(Ordinal::omega(), Ordinal(1ULL))),
                CardExpr::aleph(ord_add(Ordinal::omega(), Ordinal(1ULL)))));
}

TEST_CASE("continuum admissibility") {
  CHECK(continuum_admissible(Ordinal(1ULL)).admissible);
  CHECK(continuum_admissible(Ordinal(2ULL)).admissible);
  CHECK(continuum_admissible(Ordinal(2022ULL)).admissible);
  auto w = continuum_admissible(Ordinal::omega());
  CHECK_FALSE(w.admissible);
  CHECK(w.reason.find("cofinality omega") != std::string::npos);
  CHECK_FALSE(continuum_admissible(ord_pow(Ordinal::omega(), Ordinal(2ULL))).admissible);
  CHECK_FALSE(continuum_admissible(Ordinal()).admissible);

  // admissible iff the index is a successor, over a generated family of
  // depth <= 2 indices
  for (unsigned long long c2 = 0; c2 <= 3; ++c2)
    for (unsigned long long c1 = 0; c1 <= 3; ++c1)
      for (unsigned long long c0 = 0; c0 <= 3; ++c0) {
        Ordinal idx = ord_add(ord_mul(ord_pow(Ordinal::omega(), Ordinal(2ULL)), Ordinal(c2)),
                              ord_add(ord_mul(Ordinal::omega(), Ordinal(c1)), Ordinal(c0)));
        CHECK(continuum_admissible(idx).admissible == idx.is_successor());
      }
}

TEST_CASE("finite Koenig instances") {
  CHECK(koenig_check_finite({1, 1}, {2, 2}));
  CHECK(koenig_check_finite({0}, {1}));
  CHECK(koenig_check_finite({2, 3}, {3, 4}));
  CHECK_THROWS_AS(koenig_check_finite({1}, {1, 2}), Error);
  CHECK_THROWS_AS(koenig_check_finite({2}, {2}), Error);  // strict hypothesis

  // exhaustive: every valid instance with l_i >= 2, length <= 4, entries <= 5
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::size_t> state(std::size_t(len), 0);
    // enumerate (k, l) per position: l in [2,5], k in [0, l)
    std::vector<std::pair<int, int>> combos;
    for (int l = 2; l <= 5; ++l)
      for (int k = 0; k < l; ++k) combos.emplace_back(k, l);
    bool more = true;
    while (more) {
      std::vector<BigNat> ks, ls;
      for (int i = 0; i < len; ++i) {
        ks.push_back(combos[state[std::size_t(i)]].first);
        ls.push_back(combos[state[std::size_t(i)]].second);
      }
      REQUIRE(koenig_check_finite(ks, ls));
      std::size_t k = 0;
      for (; k < state.size(); ++k) {
        if (++state[k] < combos.size()) break;
        state[k] = 0;
      }
      if (k == state.size()) more = false;
    }
  }
}

TEST_CASE("cardinal expression text forms") {
  CHECK(card_eq(parse_card("aleph(w^2)"), CardExpr::aleph(ord_pow(Ordinal::omega(), Ordinal(2ULL)))));
  CHECK(card_eq(parse_card("2^aleph(0)"), CardExpr::two_pow(aleph(0))));
  CHECK(to_string(CardExpr::two_pow(aleph(0))) == "2^aleph(0)");
  CHECK(card_eq(parse_card(to_string(parse_card("aleph(1) + 2^aleph(0) * aleph(2)"))),
                parse_card("aleph(1) + 2^aleph(0) * aleph(2)")));
  CHECK_THROWS_AS(parse_card("aleph("), ParseError);
}

#pragma once

// Symbolic aleph arithmetic under choice, cardinal cofinality, the finite
// instance checker for Koenig's theorem and the continuum admissibility rule.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "forcelab/error.hpp"
#include "forcelab/ordinal.hpp"

namespace forcelab {

enum class CardKind { Finite, Aleph, Sum, Prod, Pow, TwoPow };

// Expression tree over finite cardinals, alephs with CNF indices, sums,
// products, powers and 2^x. Comparisons the axioms cannot settle (CH itself,
// for instance) are left symbolic rather than rejected.
struct CardExpr {
  CardKind kind = CardKind::Finite;
  BigNat n = 0;                // Finite
  Ordinal index;               // Aleph
  std::vector<CardExpr> args;  // Sum/Prod n-ary, Pow binary, TwoPow unary

  static CardExpr finite(BigNat v) {
    CardExpr e;
    e.kind = CardKind::Finite;
    e.n = std::move(v);
    return e;
  }
  static CardExpr aleph(Ordinal idx) {
    CardExpr e;
    e.kind = CardKind::Aleph;
    e.index = std::move(idx);
    return e;
  }
  static CardExpr sum(std::vector<CardExpr> xs) {
    CardExpr e;
    e.kind = CardKind::Sum;
    e.args = std::move(xs);
    return e;
  }
  static CardExpr prod(std::vector<CardExpr> xs) {
    CardExpr e;
    e.kind = CardKind::Prod;
    e.args = std::move(xs);
    return e;
  }
  static CardExpr pow(CardExpr base, CardExpr exp) {
    CardExpr e;
    e.kind = CardKind::Pow;
    e.args = {std::move(base), std::move(exp)};
    return e;
  }
  static CardExpr two_pow(CardExpr x) {
    CardExpr e;
    e.kind = CardKind::TwoPow;
    e.args = {std::move(x)};
    return e;
  }

  bool is_finite() const { return kind == CardKind::Finite; }
  bool is_infinite_atom() const { return kind == CardKind::Aleph || kind == CardKind::TwoPow; }
};

inline std::string to_string(const CardExpr& e);

inline bool card_eq(const CardExpr& a, const CardExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case CardKind::Finite:
      return a.n == b.n;
    case CardKind::Aleph:
      return a.index == b.index;
    default:
      if (a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!card_eq(a.args[i], b.args[i])) return false;
      return true;
  }
}

enum class Tri { Yes, No, Unknown };

// Is a <= b provable from the normalization rules alone? Only called on
// normalized atoms (Finite, Aleph, TwoPow-of-normalized).
inline Tri known_le(const CardExpr& a, const CardExpr& b) {
  if (a.kind == CardKind::Finite && b.kind == CardKind::Finite)
    return a.n <= b.n ? Tri::Yes : Tri::No;
  if (a.kind == CardKind::Finite) return Tri::Yes;  // finite <= any infinite form
  if (b.kind == CardKind::Finite) return Tri::No;
  if (a.kind == CardKind::Aleph && b.kind == CardKind::Aleph)
    return a.index <= b.index ? Tri::Yes : Tri::No;
  if (a.kind == CardKind::Aleph && b.kind == CardKind::TwoPow) {
    // 2^aleph_beta >= aleph_{beta+1}, so aleph_alpha <= 2^aleph_beta when alpha <= beta+1
    const CardExpr& x = b.args[0];
    if (x.kind == CardKind::Aleph)
      return a.index <= ord_add(x.index, Ordinal(1ULL)) ? Tri::Yes : Tri::Unknown;
    return Tri::Unknown;
  }
  if (a.kind == CardKind::TwoPow && b.kind == CardKind::Aleph) {
    const CardExpr& x = a.args[0];
    if (x.kind == CardKind::Aleph) {
      // 2^aleph_beta > aleph_beta, so it cannot be <= any aleph_alpha with alpha <= beta
      if (b.index <= x.index) return Tri::No;
      return Tri::Unknown;
    }
    return Tri::Unknown;
  }
  if (a.kind == CardKind::TwoPow && b.kind == CardKind::TwoPow) {
    Tri inner = known_le(a.args[0], b.args[0]);
    return inner == Tri::Yes ? Tri::Yes : Tri::Unknown;  // monotone, equality possible otherwise
  }
  return Tri::Unknown;
}

inline CardExpr card_normalize(const CardExpr& expr);

namespace detail {

inline std::string card_sort_key(const CardExpr& e) { return to_string(e); }

// Absorb x + y (or x * y) = max(x, y) across pairwise-comparable infinite
// atoms; undecidable pairs are kept symbolic.
inline std::vector<CardExpr> absorb_max(std::vector<CardExpr> xs) {
  std::vector<CardExpr> kept;
  for (auto& x : xs) {
    bool absorbed = false;
    for (auto& k : kept) {
      if (known_le(x, k) == Tri::Yes) {
        absorbed = true;
        break;
      }
    }
    if (absorbed) continue;
    // drop previously kept atoms now dominated by x
    std::vector<CardExpr> still;
    for (auto& k : kept)
      if (known_le(k, x) != Tri::Yes) still.push_back(k);
    still.push_back(x);
    kept = std::move(still);
  }
  std::sort(kept.begin(), kept.end(), [](const CardExpr& a, const CardExpr& b) {
    return card_sort_key(a) < card_sort_key(b);
  });
  return kept;
}

inline void flatten_into(const CardExpr& e, CardKind kind, std::vector<CardExpr>& out) {
  if (e.kind == kind) {
    for (const auto& a : e.args) flatten_into(a, kind, out);
  } else {
    out.push_back(e);
  }
}

}  // namespace detail

inline CardExpr card_normalize(const CardExpr& expr) {
  switch (expr.kind) {
    case CardKind::Finite:
    case CardKind::Aleph:
      return expr;

    case CardKind::TwoPow: {
      CardExpr x = card_normalize(expr.args[0]);
      if (x.kind == CardKind::Finite) {
        if (x.n > 4096) throw Error("card_normalize: 2^n blow-up");
        BigNat v = 1;
        for (BigNat i = 0; i < x.n; ++i) v *= 2;
        return CardExpr::finite(v);
      }
      // (2^mu)^... handled in Pow; 2^(2^x) stays symbolic
      return CardExpr::two_pow(std::move(x));
    }

    case CardKind::Pow: {
      CardExpr base = card_normalize(expr.args[0]);
      CardExpr exp = card_normalize(expr.args[1]);
      if (exp.kind == CardKind::Finite) {
        if (exp.n == 0) return CardExpr::finite(1);
        if (exp.n == 1) return base;
        if (base.kind == CardKind::Finite) {
          if (exp.n > 4096) throw Error("card_normalize: finite power blow-up");
          BigNat v = 1;
          for (BigNat i = 0; i < exp.n; ++i) v *= base.n;
          return CardExpr::finite(v);
        }
        return base;  // kappa^m = kappa for infinite kappa, finite m >= 1
      }
      // exponent is an infinite form
      if (base.kind == CardKind::Finite) {
        if (base.n == 0) return CardExpr::finite(0);
        if (base.n == 1) return CardExpr::finite(1);
        return card_normalize(CardExpr::two_pow(exp));  // n^lambda = 2^lambda, 2 <= n < aleph_0
      }
      if (base.kind == CardKind::Aleph && exp.kind == CardKind::Aleph) {
        if (base.index <= exp.index) return CardExpr::two_pow(exp);  // kappa^lambda = 2^lambda
        return CardExpr::pow(std::move(base), std::move(exp));
      }
      if (base.kind == CardKind::TwoPow) {
        // (2^mu)^lambda = 2^(mu*lambda) = 2^max when comparable
        CardExpr mu = base.args[0];
        Tri le = known_le(mu, exp);
        Tri ge = known_le(exp, mu);
        if (le == Tri::Yes) return card_normalize(CardExpr::two_pow(exp));
        if (ge == Tri::Yes) return card_normalize(CardExpr::two_pow(mu));
        return CardExpr::pow(std::move(base), std::move(exp));
      }
      return CardExpr::pow(std::move(base), std::move(exp));
    }

    case CardKind::Sum:
    case CardKind::Prod: {
      bool is_sum = expr.kind == CardKind::Sum;
      std::vector<CardExpr> flat;
      detail::flatten_into(expr, expr.kind, flat);
      BigNat fin = is_sum ? 0 : 1;
      std::vector<CardExpr> infs;
      for (auto& a : flat) {
        CardExpr x = card_normalize(a);
        if (x.kind == CardKind::Finite) {
          if (is_sum)
            fin += x.n;
          else
            fin *= x.n;
        } else if (x.kind == expr.kind) {
          for (auto& sub : x.args) infs.push_back(sub);  // renormalized nested op
        } else {
          infs.push_back(std::move(x));
        }
      }
      if (!is_sum && fin == 0) return CardExpr::finite(0);
      if (infs.empty()) return CardExpr::finite(fin);
      // absorption: finite operands vanish against any infinite operand
      // (for products, a finite factor >= 1 is dropped)
      std::vector<CardExpr> kept = detail::absorb_max(std::move(infs));
      if (kept.size() == 1) return kept[0];
      return is_sum ? CardExpr::sum(std::move(kept)) : CardExpr::prod(std::move(kept));
    }
  }
  throw Error("card_normalize: unreachable");
}

// Cofinality of aleph_alpha. Aleph(0) stands for omega: indices below
// epsilon_0 make every limit-index aleph omega-cofinal, and successor-index
// alephs are regular.
inline CardExpr card_cofinality(const Ordinal& alpha) {
  if (alpha.is_zero() || alpha.is_limit()) return CardExpr::aleph(Ordinal());
  return CardExpr::aleph(alpha);
}

struct AdmissibilityVerdict {
  bool admissible;
  std::string reason;
};

// May the continuum equal aleph_alpha? Koenig's theorem forbids cofinality
// omega (and Cantor's theorem rules out alpha = 0, which the same cofinality
// rule covers since cf(aleph_0) = omega).
inline AdmissibilityVerdict continuum_admissible(const Ordinal& alpha) {
  CardExpr cf = card_cofinality(alpha);
  bool cf_omega = cf.kind == CardKind::Aleph && cf.index.is_zero();
  if (alpha.is_zero() || cf_omega)
    return {false, "cofinality omega: cf(2^aleph(0)) cannot be omega"};
  return {true, "successor index: aleph(" + to_string(alpha) + ") is regular and uncountable"};
}

// Finite sanity instance of Koenig's theorem: with k_i < l_i pointwise the
// strict inequality sum(k) < prod(l) must hold. The hypothesis is the strict
// pointwise one; the conclusion is checked, not assumed.
inline bool koenig_check_finite(const std::vector<BigNat>& ks, const std::vector<BigNat>& ls) {
  if (ks.size() != ls.size()) throw Error("koenig_check_finite: length mismatch");
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (!(ks[i] < ls[i]))
      throw Error("koenig_check_finite: hypothesis violated at index " + std::to_string(i));
  BigNat sum = 0, prod = 1;
  for (const auto& k : ks) sum += k;
  for (const auto& l : ls) prod *= l;
  return sum < prod;
}

inline std::string to_string(const CardExpr& e) {
  switch (e.kind) {
    case CardKind::Finite:
      return e.n.str();
    case CardKind::Aleph:
      return "aleph(" + to_string(e.index) + ")";
    case CardKind::TwoPow: {
      const CardExpr& x = e.args[0];
      bool atom = x.kind == CardKind::Finite || x.kind == CardKind::Aleph || x.kind == CardKind::TwoPow;
      return atom ? "2^" + to_string(x) : "2^(" + to_string(x) + ")";
    }
    case CardKind::Pow: {
      auto wrap = [](const CardExpr& x) {
        bool atom = x.kind == CardKind::Finite || x.kind == CardKind::Aleph;
        return atom ? to_string(x) : "(" + to_string(x) + ")";
      };
      return wrap(e.args[0]) + "^" + wrap(e.args[1]);
    }
    case CardKind::Sum:
    case CardKind::Prod: {
      std::string sep = e.kind == CardKind::Sum ? " + " : " * ";
      std::string out;
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += sep;
        const CardExpr& x = e.args[i];
        bool atom = x.kind != CardKind::Sum && x.kind != CardKind::Prod;
        out += atom ? to_string(x) : "(" + to_string(x) + ")";
      }
      return out;
    }
  }
  throw Error("to_string(CardExpr): unreachable");
}

namespace detail {

struct CardParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip_ws();
    if (text.substr(pos, w.size()) == w) {
      pos += w.size();
      return true;
    }
    return false;
  }

  CardExpr atom() {
    skip_ws();
    if (eat_word("aleph")) {
      if (!eat('(')) throw ParseError("expected '(' after aleph", pos);
      std::size_t depth = 1, start = pos;
      while (pos < text.size() && depth > 0) {
        if (text[pos] == '(') ++depth;
        if (text[pos] == ')') --depth;
        if (depth > 0) ++pos;
      }
      if (depth != 0) throw ParseError("unterminated aleph(...)", pos);
      Ordinal idx = parse_ordinal(text.substr(start, pos - start));
      ++pos;  // ')'
      return CardExpr::aleph(idx);
    }
    if (eat('(')) {
      CardExpr e = sum();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return e;
    }
    if (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) {
      std::string digits;
      while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) digits += text[pos++];
      return CardExpr::finite(BigNat(digits));
    }
    throw ParseError("expected a cardinal expression", pos);
  }

  CardExpr power() {
    CardExpr base = atom();
    if (eat('^')) {
      CardExpr exp = power();  // right associative
      if (base.kind == CardKind::Finite && base.n == 2) return CardExpr::two_pow(std::move(exp));
      return CardExpr::pow(std::move(base), std::move(exp));
    }
    return base;
  }

  CardExpr product() {
    CardExpr acc = power();
    std::vector<CardExpr> xs;
    xs.push_back(std::move(acc));
    while (eat('*')) xs.push_back(power());
    return xs.size() == 1 ? xs[0] : CardExpr::prod(std::move(xs));
  }

  CardExpr sum() {
    std::vector<CardExpr> xs;
    xs.push_back(product());
    while (eat('+')) xs.push_back(product());
    return xs.size() == 1 ? xs[0] : CardExpr::sum(std::move(xs));
  }
};

}  // namespace detail

inline CardExpr parse_card(std::string_view text) {
  detail::CardParser p{text};
  CardExpr e = p.sum();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input after cardinal expression", p.pos);
  return e;
}

}  // namespace forcelab

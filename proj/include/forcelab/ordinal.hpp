#pragma once

// Ordinals below epsilon_0 in Cantor normal form: comparison, addition,
// multiplication, exponentiation and cofinality.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forcelab/error.hpp"

namespace forcelab {

using BigNat = boost::multiprecision::cpp_int;  // used as nonnegative only

// A strictly-decreasing list of terms w^exp * coeff with coeff >= 1; the
// empty list is 0. The representation is unique per ordinal, so structural
// equality is ordinal equality. epsilon_0 itself exists only as a cap on the
// tower depth of exponents.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;  // 0
  Ordinal(unsigned long long n);

  static Ordinal finite(BigNat n);
  static Ordinal omega();
  static Ordinal omega_pow(const Ordinal& e, BigNat coeff = 1);
  static Ordinal from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  BigNat finite_value() const;
  BigNat finite_part() const;  // the w^0 coefficient, 0 when absent
  bool is_successor() const;
  bool is_limit() const;
  int depth() const;  // exponent tower depth; 0 for finite ordinals

  static int cmp(const Ordinal& a, const Ordinal& b);
  bool operator==(const Ordinal& o) const { return cmp(*this, o) == 0; }
  bool operator!=(const Ordinal& o) const { return cmp(*this, o) != 0; }
  bool operator<(const Ordinal& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const Ordinal& o) const { return cmp(*this, o) <= 0; }
  bool operator>(const Ordinal& o) const { return cmp(*this, o) > 0; }
  bool operator>=(const Ordinal& o) const { return cmp(*this, o) >= 0; }

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exp;
  BigNat coeff;
};

inline Ordinal::Ordinal(unsigned long long n) { *this = finite(BigNat(n)); }

inline Ordinal Ordinal::finite(BigNat n) {
  if (n < 0) throw Error("ordinal: negative natural");
  Ordinal o;
  if (n > 0) o.terms_.push_back(Term{Ordinal(), std::move(n)});
  return o;
}

inline Ordinal Ordinal::omega() { return omega_pow(Ordinal(1ULL), 1); }

inline Ordinal Ordinal::omega_pow(const Ordinal& e, BigNat coeff) {
  if (coeff < 0) throw Error("ordinal: negative coefficient");
  Ordinal o;
  if (coeff > 0) o.terms_.push_back(Term{e, std::move(coeff)});
  return o;
}

inline Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff < 1) throw Error("ordinal: coefficient must be >= 1");
    if (i > 0 && cmp(terms[i - 1].exp, terms[i].exp) <= 0)
      throw Error("ordinal: exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.is_zero());
}

inline BigNat Ordinal::finite_value() const {
  if (!is_finite()) throw Error("ordinal: not finite");
  return terms_.empty() ? BigNat(0) : terms_[0].coeff;
}

inline BigNat Ordinal::finite_part() const {
  if (!terms_.empty() && terms_.back().exp.is_zero()) return terms_.back().coeff;
  return 0;
}

inline bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exp.is_zero(); }
inline bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exp.is_zero(); }

inline int Ordinal::depth() const {
  int d = 0;
  for (const Term& t : terms_)
    if (!t.exp.is_zero()) d = std::max(d, 1 + t.exp.depth());
  return d;
}

inline int Ordinal::cmp(const Ordinal& a, const Ordinal& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(a.terms_[i].exp, b.terms_[i].exp);
    if (c != 0) return c;
    if (a.terms_[i].coeff != b.terms_[i].coeff) return a.terms_[i].coeff < b.terms_[i].coeff ? -1 : 1;
  }
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
  return 0;
}

enum class Cofinality { Zero, One, Omega };

inline Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms().front().exp;
  std::vector<Ordinal::Term> out;
  std::size_t keep = 0;  // a's terms above b's leading exponent survive
  while (keep < a.terms().size() && Ordinal::cmp(a.terms()[keep].exp, lead) > 0)
    out.push_back(a.terms()[keep++]);
  std::size_t bi = 0;
  if (keep < a.terms().size() && Ordinal::cmp(a.terms()[keep].exp, lead) == 0) {
    out.push_back(Ordinal::Term{lead, a.terms()[keep].coeff + b.terms().front().coeff});
    bi = 1;
  }
  for (; bi < b.terms().size(); ++bi) out.push_back(b.terms()[bi]);
  return Ordinal::from_terms(std::move(out));
}

inline Ordinal ord_mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  const Ordinal& alpha = a.terms().front().exp;
  Ordinal acc;
  for (const auto& t : b.terms()) {
    Ordinal piece;
    if (!t.exp.is_zero()) {
      piece = Ordinal::omega_pow(ord_add(alpha, t.exp), t.coeff);
    } else {
      // a * n = w^alpha * (c1*n) + tail(a)
      std::vector<Ordinal::Term> ts = a.terms();
      ts.front().coeff *= t.coeff;
      piece = Ordinal::from_terms(std::move(ts));
    }
    acc = ord_add(acc, piece);
  }
  return acc;
}

namespace detail {

inline Ordinal ord_pow_finite_exp(const Ordinal& a, const BigNat& m) {
  // binary exponentiation; m >= 1, a infinite
  Ordinal result(1ULL);
  std::vector<bool> bits;
  for (BigNat x = m; x > 0; x >>= 1) bits.push_back((x & 1) != 0);
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
    result = ord_mul(result, result);
    if (*it) result = ord_mul(result, a);
  }
  return result;
}

}  // namespace detail

// Standard CNF exponentiation. Throws when the result would exceed the
// representable tower depth or when a finite^finite blow-up is unreasonable.
inline Ordinal ord_pow(const Ordinal& a, const Ordinal& b, int depth_cap = 64) {
  if (b.is_zero()) return Ordinal(1ULL);
  if (a.is_zero()) return Ordinal();
  if (a == Ordinal(1ULL)) return Ordinal(1ULL);

  // split b into its limit part and finite part
  std::vector<Ordinal::Term> limit_terms;
  for (const auto& t : b.terms())
    if (!t.exp.is_zero()) limit_terms.push_back(t);
  BigNat m = b.finite_part();

  Ordinal result(1ULL);
  if (a.is_finite()) {
    BigNat n = a.finite_value();
    if (!limit_terms.empty()) {
      // n^(w^beta * c): the exponent transform drops one level for finite
      // beta and is untouched for infinite beta
      Ordinal e;
      for (const auto& t : limit_terms) {
        Ordinal contrib;
        if (t.exp.is_finite())
          contrib = Ordinal::omega_pow(Ordinal::finite(t.exp.finite_value() - 1), t.coeff);
        else
          contrib = Ordinal::omega_pow(t.exp, t.coeff);
        e = ord_add(e, contrib);
      }
      result = Ordinal::omega_pow(e);
    }
    if (m > 0) {
      if (m > 1000000) throw Error("ord_pow: finite exponent too large");
      BigNat nm = 1;
      for (BigNat i = 0; i < m; ++i) nm *= n;
      result = ord_mul(result, Ordinal::finite(nm));
    }
  } else {
    const Ordinal& alpha = a.terms().front().exp;
    if (!limit_terms.empty()) {
      Ordinal lambda = Ordinal::from_terms(limit_terms);
      result = Ordinal::omega_pow(ord_mul(alpha, lambda));  // a^lambda = w^(alpha*lambda)
    }
    if (m > 0) result = ord_mul(result, detail::ord_pow_finite_exp(a, m));
  }
  if (result.depth() > depth_cap)
    throw Error("ord_pow: result exceeds the epsilon_0 representation depth cap");
  return result;
}

inline Cofinality cofinality(const Ordinal& a) {
  if (a.is_zero()) return Cofinality::Zero;
  if (a.is_successor()) return Cofinality::One;
  return Cofinality::Omega;  // every limit below epsilon_0 is a countable limit
}

inline std::string to_string(const Ordinal& o) {
  if (o.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < o.terms().size(); ++i) {
    const auto& t = o.terms()[i];
    if (i) out += " + ";
    if (t.exp.is_zero()) {
      out += t.coeff.str();
      continue;
    }
    out += "w";
    if (t.exp != Ordinal(1ULL)) {
      if (t.exp.is_finite())
        out += "^" + t.exp.finite_value().str();
      else
        out += "^(" + to_string(t.exp) + ")";
    }
    if (t.coeff != 1) out += "*" + t.coeff.str();
  }
  return out;
}

namespace detail {

struct OrdParser {
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

  BigNat nat() {
    skip_ws();
    if (pos >= text.size() || !isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected a natural number", pos);
    std::string digits;
    while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) digits += text[pos++];
    return BigNat(digits);
  }

  Ordinal exponent() {
    skip_ws();
    if (eat('(')) {
      Ordinal o = sum();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return o;
    }
    if (pos < text.size() && (text[pos] == 'w' || text[pos] == 'W')) {
      ++pos;
      return Ordinal::omega();
    }
    return Ordinal::finite(nat());
  }

  Ordinal term() {
    skip_ws();
    if (pos < text.size() && (text[pos] == 'w' || text[pos] == 'W')) {
      ++pos;
      Ordinal e(1ULL);
      if (eat('^')) e = exponent();
      BigNat c = 1;
      if (eat('*')) c = nat();
      return Ordinal::omega_pow(e, c);
    }
    return Ordinal::finite(nat());
  }

  Ordinal sum() {
    Ordinal acc = term();
    while (eat('+')) acc = ord_add(acc, term());
    return acc;
  }
};

}  // namespace detail

inline Ordinal parse_ordinal(std::string_view text) {
  detail::OrdParser p{text};
  Ordinal o = p.sum();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input after ordinal", p.pos);
  return o;
}

}  // namespace forcelab

#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "tel/rational.hpp"

namespace tel {

// Countable ordinal below epsilon_0 in Cantor Normal Form:
//   a = w^{b_1}*c_1 + ... + w^{b_k}*c_k,  b_1 > ... > b_k,  c_i >= 1.
// The empty term list is 0. Exponents are themselves Ordinals, so the
// representation is unique per value and equality is structural.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;
  static Ordinal from_int(const Int& n);
  static Ordinal omega();
  static Ordinal single(Ordinal exponent, Int coeff);  // w^exponent * coeff

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  const Ordinal& leading_exp() const;  // requires non-zero
  const Ordinal& last_exp() const;     // requires non-zero
  bool is_finite() const;
  Int as_int() const;  // requires finite

  // Built by ops below; keeps the CNF invariant.
  static Ordinal from_terms(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  Int coeff;
};

enum class OrdTag { Zero, Successor, Limit };

struct OrdinalKind {
  OrdTag tag = OrdTag::Zero;
  std::optional<Ordinal> predecessor;  // set iff Successor
};

int compare(const Ordinal& a, const Ordinal& b);  // -1, 0, 1
bool operator==(const Ordinal& a, const Ordinal& b);
bool operator!=(const Ordinal& a, const Ordinal& b);
bool operator<(const Ordinal& a, const Ordinal& b);
bool operator<=(const Ordinal& a, const Ordinal& b);
bool operator>(const Ordinal& a, const Ordinal& b);
bool operator>=(const Ordinal& a, const Ordinal& b);

// Ordinal sum: terms of a below the leading exponent of b are absorbed.
Ordinal add(const Ordinal& a, const Ordinal& b);
// a * n for natural n >= 1 (n = 0 gives 0); equals the n-fold sum.
Ordinal nat_mul(const Ordinal& a, const Int& n);
Ordinal omega_pow(const Ordinal& b);
// True iff a = w^b for some b, i.e. one CNF term with coefficient 1.
bool is_irreducible(const Ordinal& a);  // requires a > 0
OrdinalKind classify(const Ordinal& a);
bool is_limit(const Ordinal& a);
bool is_successor(const Ordinal& a);
Ordinal pred(const Ordinal& a);  // requires successor

// Canonical (Wainer-style) fundamental sequence of a limit ordinal:
//   (d + w^{g+1})[i] = d + w^g * i
//   (d + w^l)[i]     = d + w^{l[i]}           (l limit)
//   (d + w^b * m)[i] = (d + w^b*(m-1) + w^b)[i]  (m > 1)
// Strictly increasing in i with supremum a.
Ordinal fundamental_seq(const Ordinal& a, const Int& i);

// The unique g with a + g = b, for a <= b (stage arithmetic helper).
Ordinal left_subtract(const Ordinal& a, const Ordinal& b);
// Hessenberg (natural) sum: CNF terms merged by exponent. Used for
// topological ranks of product points.
Ordinal natural_sum(const Ordinal& a, const Ordinal& b);

// Literal grammar:  ord := term ("+" term)*
//                   term := "w" ("^" expo)? ("*" nat)? | nat
//                   expo := term-with-coeff-1 | nat | "(" ord ")"
// Canonical output elides "^1" and "*1", e.g. "w^2*3+w+4".
Ordinal parse_ordinal(const std::string& text);
std::string format_ordinal(const Ordinal& a);

}  // namespace tel

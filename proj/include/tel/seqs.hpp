#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "tel/rational.hpp"

namespace tel {

// Step function of a natural index k with finitely many jumps. Used for
// exact k-indexed evaluations h_k(x), tau_k(x) and region suprema; the
// eventual value is the exact k-limit.
class KValue {
 public:
  KValue() : steps_{{0, Rat(0)}} {}
  static KValue constant(const Rat& v) {
    KValue kv;
    kv.steps_ = {{0, v}};
    return kv;
  }
  // value `before` for k < k0, `after` for k >= k0
  static KValue threshold(long k0, const Rat& before, const Rat& after) {
    KValue kv;
    if (k0 <= 0) {
      kv.steps_ = {{0, after}};
    } else {
      kv.steps_ = {{0, before}, {k0, after}};
    }
    kv.normalize();
    return kv;
  }

  Rat at(long k) const {
    Rat v = steps_.front().second;
    for (const auto& [from, val] : steps_) {
      if (from <= k) v = val;
    }
    return v;
  }
  const Rat& tail() const { return steps_.back().second; }
  const std::vector<std::pair<long, Rat>>& steps() const { return steps_; }

  KValue scaled(const Rat& c) const {
    KValue out = *this;
    for (auto& [from, v] : out.steps_) v *= c;
    return out;
  }
  KValue shifted(const Rat& c) const {
    KValue out = *this;
    for (auto& [from, v] : out.steps_) v += c;
    return out;
  }

  friend KValue kmax(const KValue& a, const KValue& b) { return merge(a, b, true); }
  friend KValue kplus(const KValue& a, const KValue& b) { return merge(a, b, false); }

 private:
  static KValue merge(const KValue& a, const KValue& b, bool take_max) {
    std::vector<long> cuts;
    for (const auto& s : a.steps_) cuts.push_back(s.first);
    for (const auto& s : b.steps_) cuts.push_back(s.first);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    KValue out;
    out.steps_.clear();
    for (long c : cuts) {
      Rat va = a.at(c), vb = b.at(c);
      out.steps_.emplace_back(c, take_max ? std::max(va, vb) : va + vb);
    }
    out.normalize();
    return out;
  }
  void normalize() {
    std::vector<std::pair<long, Rat>> out;
    for (auto& s : steps_) {
      if (!out.empty() && out.back().second == s.second) continue;
      out.push_back(s);
    }
    steps_ = std::move(out);
  }
  std::vector<std::pair<long, Rat>> steps_;  // (k_from, value), k_from ascending, first is 0
};

KValue kmax(const KValue& a, const KValue& b);
KValue kplus(const KValue& a, const KValue& b);

// Dense integer-coefficient polynomial, ascending powers.
struct Poly {
  std::vector<Int> c;

  static Poly constant(const Int& v) { return Poly{{v}}; }
  static Poly var() { return Poly{{0, 1}}; }

  int degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
      if (c[static_cast<std::size_t>(i)] != 0) return i;
    return -1;  // zero polynomial
  }
  const Int& lead() const {
    static const Int zero = 0;
    int d = degree();
    return d < 0 ? zero : c[static_cast<std::size_t>(d)];
  }
  Int eval(const Int& n) const {
    Int acc = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) acc = acc * n + c[static_cast<std::size_t>(i)];
    return acc;
  }
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  // All integers n >= this bound have sign(p(n)) == sign(lead); Cauchy-style root bound.
  long stable_sign_from() const;
};

// Sequence n -> num(n)/den(n) of exact rationals, defined for n >= defined_from
// (den must not vanish there; guarded at eval). Supports exact limits and exact
// suprema over tails via eventual monotonicity of rational functions.
class RationalSeq {
 public:
  RationalSeq() : num_(Poly::constant(0)), den_(Poly::constant(1)) {}
  RationalSeq(Poly num, Poly den, long defined_from = 1);
  static RationalSeq constant(const Rat& v);
  // p/q evaluated at n, e.g. a*n/(n+1):
  static RationalSeq from_fraction(const Poly& num, const Poly& den, long defined_from = 1);

  Rat eval(long n) const;
  long defined_from() const { return from_; }

  // Exact limit as n -> infinity; requires deg num <= deg den.
  Rat limit() const;
  // Exact supremum of { eval(n) : n > i }.
  Rat sup_after(long i) const;
  bool eventually_nondecreasing() const;

  RationalSeq scaled(const Rat& c) const;
  RationalSeq plus_const(const Rat& c) const;
  friend RationalSeq seq_add(const RationalSeq& a, const RationalSeq& b);
  friend RationalSeq seq_mul(const RationalSeq& a, const RationalSeq& b);

 private:
  long monotone_from() const;  // index beyond which the sequence is monotone
  Poly num_, den_;
  long from_;
};

// Member-indexed bundle: explicit exceptional values for small n, then the
// pointwise max of finitely many RationalSeq branches. This is the closed
// form a union stream exposes for per-member suprema.
struct SeqBundle {
  std::vector<std::pair<long, Rat>> exceptions;  // explicit (n, value)
  std::vector<RationalSeq> branches;             // valid for n >= tail_from
  long tail_from = 1;

  Rat value(long n) const;
  // sup over n > i (exact; exceptions beyond i plus branch tails)
  Rat sup_after(long i) const;
  // lim_i sup_{n>i} = limsup; exact max of branch limits
  Rat limsup() const;
  SeqBundle scaled(const Rat& c) const;
};

}  // namespace tel

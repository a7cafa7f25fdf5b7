#include "tel/seqs.hpp"

namespace tel {

Poly operator+(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] += b.c[i];
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) out.c[i] -= b.c[i];
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.degree() < 0 || b.degree() < 0) return Poly::constant(0);
  Poly out;
  out.c.resize(a.c.size() + b.c.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  return out;
}

long Poly::stable_sign_from() const {
  int d = degree();
  if (d <= 0) return 1;
  Int m = 0;
  for (int i = 0; i < d; ++i) m = std::max(m, abs(c[static_cast<std::size_t>(i)]));
  Int l = abs(lead());
  Int bound = 2 + m / l;  // 1 + max|a_i|/|a_d| rounded up, plus slack
  long out = 1;
  if (bound > 1000000) throw DomainError("polynomial root bound too large");
  out = static_cast<long>(bound);
  return out;
}

RationalSeq::RationalSeq(Poly num, Poly den, long defined_from)
    : num_(std::move(num)), den_(std::move(den)), from_(defined_from) {
  if (den_.degree() < 0) throw DomainError("zero denominator sequence");
  // normalize so the denominator is eventually positive
  if (den_.lead() < 0) {
    for (auto& v : num_.c) v = -v;
    for (auto& v : den_.c) v = -v;
  }
}

RationalSeq RationalSeq::constant(const Rat& v) {
  return RationalSeq(Poly::constant(numerator(v)), Poly::constant(denominator(v)), 1);
}

RationalSeq RationalSeq::from_fraction(const Poly& num, const Poly& den, long defined_from) {
  return RationalSeq(num, den, defined_from);
}

Rat RationalSeq::eval(long n) const {
  if (n < from_) throw DomainError("sequence evaluated below its domain");
  Int d = den_.eval(n);
  if (d <= 0) throw DomainError("sequence denominator not positive at n=" + std::to_string(n));
  return Rat(num_.eval(n), d);
}

Rat RationalSeq::limit() const {
  int dn = num_.degree(), dd = den_.degree();
  if (dn > dd) throw DomainError("divergent sequence has no rational limit");
  if (dn < dd) return Rat(0);
  return Rat(num_.lead(), den_.lead());
}

long RationalSeq::monotone_from() const {
  // difference f(n+1)-f(n) has numerator num(n+1)den(n)-num(n)den(n+1); its
  // sign is stable beyond the root bound.
  Poly shift_num, shift_den;
  // p(n+1) via binomial expansion
  auto shift = [](const Poly& p) {
    Poly out = Poly::constant(0);
    Poly pw = Poly::constant(1);  // (n+1)^i built incrementally
    Poly np1;
    np1.c = {Int(1), Int(1)};
    for (std::size_t i = 0; i < p.c.size(); ++i) {
      Poly term = pw;
      for (auto& v : term.c) v *= p.c[i];
      out = out + term;
      pw = pw * np1;
    }
    return out;
  };
  shift_num = shift(num_);
  shift_den = shift(den_);
  Poly diff_num = shift_num * den_ - num_ * shift_den;
  return std::max(from_, std::max(diff_num.stable_sign_from(), shift_den.stable_sign_from()));
}

bool RationalSeq::eventually_nondecreasing() const {
  auto shift = [](const Poly& p) {
    Poly out = Poly::constant(0);
    Poly pw = Poly::constant(1);
    Poly np1;
    np1.c = {Int(1), Int(1)};
    for (std::size_t i = 0; i < p.c.size(); ++i) {
      Poly term = pw;
      for (auto& v : term.c) v *= p.c[i];
      out = out + term;
      pw = pw * np1;
    }
    return out;
  };
  Poly diff_num = shift(num_) * den_ - num_ * shift(den_);
  return diff_num.lead() >= 0;
}

Rat RationalSeq::sup_after(long i) const {
  long start = std::max(i + 1, from_);
  long m = monotone_from();
  Rat best = eval(start);
  for (long n = start; n <= std::max(start, m); ++n) best = std::max(best, eval(n));
  // beyond m the sequence is monotone
  if (eventually_nondecreasing()) {
    best = std::max(best, limit());  // supremum of an eventually nondecreasing tail
  } else {
    best = std::max(best, eval(std::max(start, m) + 1));
  }
  return best;
}

RationalSeq RationalSeq::scaled(const Rat& c) const {
  Poly n = num_;
  for (auto& v : n.c) v *= numerator(c);
  Poly d = den_;
  for (auto& v : d.c) v *= denominator(c);
  return RationalSeq(n, d, from_);
}

RationalSeq RationalSeq::plus_const(const Rat& c) const {
  Poly cn = den_;
  for (auto& v : cn.c) v *= numerator(c);
  Poly n2 = num_;
  for (auto& v : n2.c) v *= denominator(c);
  Poly d2 = den_;
  for (auto& v : d2.c) v *= denominator(c);
  return RationalSeq(n2 + cn, d2, from_);
}

RationalSeq seq_add(const RationalSeq& a, const RationalSeq& b) {
  return RationalSeq(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_,
                     std::max(a.from_, b.from_));
}

RationalSeq seq_mul(const RationalSeq& a, const RationalSeq& b) {
  return RationalSeq(a.num_ * b.num_, a.den_ * b.den_, std::max(a.from_, b.from_));
}

Rat SeqBundle::value(long n) const {
  for (const auto& [m, v] : exceptions)
    if (m == n) return v;
  if (n < tail_from || branches.empty())
    throw DomainError("bundle has no value at index " + std::to_string(n));
  Rat best = branches.front().eval(std::max(n, branches.front().defined_from()));
  for (const auto& b : branches) best = std::max(best, b.eval(std::max(n, b.defined_from())));
  return best;
}

Rat SeqBundle::sup_after(long i) const {
  std::optional<Rat> best;
  for (const auto& [n, v] : exceptions)
    if (n > i) best = best ? std::max(*best, v) : v;
  for (const auto& b : branches) {
    Rat s = b.sup_after(std::max(i, tail_from - 1));
    best = best ? std::max(*best, s) : s;
  }
  if (!best) throw DomainError("empty bundle supremum");
  return *best;
}

Rat SeqBundle::limsup() const {
  if (branches.empty()) throw DomainError("bundle has no closed tail form");
  Rat best = branches.front().limit();
  for (const auto& b : branches) best = std::max(best, b.limit());
  return best;
}

SeqBundle SeqBundle::scaled(const Rat& c) const {
  SeqBundle out = *this;
  for (auto& [n, v] : out.exceptions) v *= c;
  for (auto& b : out.branches) b = b.scaled(c);
  return out;
}

}  // namespace tel

#include "tel/ordinal.hpp"

#include <cctype>
#include <sstream>

namespace tel {

Ordinal Ordinal::from_int(const Int& n) {
  if (n < 0) throw DomainError("ordinal from negative integer");
  Ordinal o;
  if (n > 0) o.terms_.push_back(Term{Ordinal(), n});
  return o;
}

Ordinal Ordinal::omega() { return single(from_int(1), 1); }

Ordinal Ordinal::single(Ordinal exponent, Int coeff) {
  if (coeff <= 0) throw DomainError("ordinal term coefficient must be >= 1");
  Ordinal o;
  o.terms_.push_back(Term{std::move(exponent), std::move(coeff)});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  Ordinal o;
  o.terms_ = std::move(terms);
  for (std::size_t i = 0; i < o.terms_.size(); ++i) {
    if (o.terms_[i].coeff <= 0) throw DomainError("ordinal term coefficient must be >= 1");
    if (i + 1 < o.terms_.size() && compare(o.terms_[i + 1].exponent, o.terms_[i].exponent) >= 0)
      throw DomainError("ordinal exponents must be strictly decreasing");
  }
  return o;
}

const Ordinal& Ordinal::leading_exp() const {
  if (is_zero()) throw DomainError("leading_exp of 0");
  return terms_.front().exponent;
}

const Ordinal& Ordinal::last_exp() const {
  if (is_zero()) throw DomainError("last_exp of 0");
  return terms_.back().exponent;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

Int Ordinal::as_int() const {
  if (!is_finite()) throw DomainError("ordinal is not finite: " + format_ordinal(*this));
  return terms_.empty() ? Int(0) : terms_[0].coeff;
}

int compare(const Ordinal& a, const Ordinal& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (std::size_t i = 0; i < ta.size() && i < tb.size(); ++i) {
    int c = compare(ta[i].exponent, tb[i].exponent);
    if (c != 0) return c;
    if (ta[i].coeff != tb[i].coeff) return ta[i].coeff < tb[i].coeff ? -1 : 1;
  }
  if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
  return 0;
}

bool operator==(const Ordinal& a, const Ordinal& b) { return compare(a, b) == 0; }
bool operator!=(const Ordinal& a, const Ordinal& b) { return compare(a, b) != 0; }
bool operator<(const Ordinal& a, const Ordinal& b) { return compare(a, b) < 0; }
bool operator<=(const Ordinal& a, const Ordinal& b) { return compare(a, b) <= 0; }
bool operator>(const Ordinal& a, const Ordinal& b) { return compare(a, b) > 0; }
bool operator>=(const Ordinal& a, const Ordinal& b) { return compare(a, b) >= 0; }

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& e = b.leading_exp();
  std::vector<Ordinal::Term> out;
  for (const auto& t : a.terms()) {
    if (compare(t.exponent, e) > 0) {
      out.push_back(t);
    } else {
      break;  // absorbed (or merged below)
    }
  }
  auto bt = b.terms();
  // Merge coefficient when a has a term at the leading exponent of b.
  for (const auto& t : a.terms()) {
    if (compare(t.exponent, e) == 0) {
      bt[0].coeff += t.coeff;
      break;
    }
  }
  out.insert(out.end(), bt.begin(), bt.end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal nat_mul(const Ordinal& a, const Int& n) {
  if (n < 0) throw DomainError("nat_mul by negative");
  if (n == 0 || a.is_zero()) return Ordinal();
  // (w^b*m + rest)*n = w^b*(m*n) + rest, which equals the n-fold sum.
  auto terms = a.terms();
  terms[0].coeff *= n;
  return Ordinal::from_terms(std::move(terms));
}

Ordinal omega_pow(const Ordinal& b) { return Ordinal::single(b, 1); }

bool is_irreducible(const Ordinal& a) {
  if (a.is_zero()) throw DomainError("is_irreducible requires a > 0");
  return a.terms().size() == 1 && a.terms()[0].coeff == 1;
}

bool is_limit(const Ordinal& a) { return !a.is_zero() && !a.last_exp().is_zero(); }
bool is_successor(const Ordinal& a) { return !a.is_zero() && a.last_exp().is_zero(); }

OrdinalKind classify(const Ordinal& a) {
  if (a.is_zero()) return {OrdTag::Zero, std::nullopt};
  if (is_successor(a)) return {OrdTag::Successor, pred(a)};
  return {OrdTag::Limit, std::nullopt};
}

Ordinal pred(const Ordinal& a) {
  if (!is_successor(a)) throw DomainError("predecessor of non-successor");
  auto terms = a.terms();
  if (terms.back().coeff == 1) {
    terms.pop_back();
  } else {
    terms.back().coeff -= 1;
  }
  return Ordinal::from_terms(std::move(terms));
}

Ordinal fundamental_seq(const Ordinal& a, const Int& i) {
  if (!is_limit(a)) throw DomainError("fundamental_seq requires a limit ordinal");
  auto terms = a.terms();
  Ordinal::Term last = terms.back();
  terms.pop_back();
  Ordinal prefix = Ordinal::from_terms(terms);
  if (last.coeff > 1) {
    // (d + w^b*m)[i] -> (d + w^b*(m-1) + w^b)[i]
    prefix = add(prefix, Ordinal::single(last.exponent, last.coeff - 1));
  }
  const Ordinal& beta = last.exponent;  // a = prefix + w^beta
  if (is_successor(beta)) {
    if (i == 0) return prefix;
    return add(prefix, nat_mul(omega_pow(pred(beta)), i));
  }
  return add(prefix, omega_pow(fundamental_seq(beta, i)));
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
  if (compare(a, b) > 0) throw DomainError("left_subtract requires a <= b");
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  // Drop the common prefix of CNF terms; on the first difference the rest of b survives.
  std::size_t i = 0;
  while (i < ta.size() && i < tb.size() && compare(ta[i].exponent, tb[i].exponent) == 0 &&
         ta[i].coeff == tb[i].coeff)
    ++i;
  if (i == ta.size()) {
    std::vector<Ordinal::Term> rest(tb.begin() + static_cast<long>(i), tb.end());
    return Ordinal::from_terms(std::move(rest));
  }
  // Same exponent but smaller coefficient in a: remainder keeps the difference.
  if (i < tb.size() && compare(ta[i].exponent, tb[i].exponent) == 0 && ta[i].coeff < tb[i].coeff) {
    std::vector<Ordinal::Term> rest(tb.begin() + static_cast<long>(i), tb.end());
    rest[0].coeff = tb[i].coeff - ta[i].coeff;
    return Ordinal::from_terms(std::move(rest));
  }
  // a's term is strictly below b's term here; the whole tail of b dominates.
  std::vector<Ordinal::Term> rest(tb.begin() + static_cast<long>(i), tb.end());
  return Ordinal::from_terms(std::move(rest));
}

Ordinal natural_sum(const Ordinal& a, const Ordinal& b) {
  std::vector<Ordinal::Term> out;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (i == ta.size()) {
      out.push_back(tb[j++]);
    } else if (j == tb.size()) {
      out.push_back(ta[i++]);
    } else {
      int c = compare(ta[i].exponent, tb[j].exponent);
      if (c > 0) {
        out.push_back(ta[i++]);
      } else if (c < 0) {
        out.push_back(tb[j++]);
      } else {
        out.push_back(Ordinal::Term{ta[i].exponent, ta[i].coeff + tb[j].coeff});
        ++i, ++j;
      }
    }
  }
  return Ordinal::from_terms(std::move(out));
}

namespace {

struct OrdParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit OrdParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }

  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
  bool eat(char c) {
    if (!eof() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  Int parse_nat() {
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected number");
    std::size_t start = pos;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    return Int(s.substr(start, pos - start));
  }

  // expo := "(" ord ")" | nat | "w" ("^" expo)?   (single w-term, coefficient 1)
  Ordinal parse_expo() {
    if (eat('(')) {
      Ordinal o = parse_ord();
      if (!eat(')')) fail("expected ')'");
      return o;
    }
    if (!eof() && peek() == 'w') {
      ++pos;
      if (eat('^')) return omega_pow(parse_expo());
      return Ordinal::omega();
    }
    return Ordinal::from_int(parse_nat());
  }

  Ordinal parse_term() {
    if (!eof() && peek() == 'w') {
      ++pos;
      Ordinal expo = Ordinal::from_int(1);
      if (eat('^')) expo = parse_expo();
      Int coeff = 1;
      if (eat('*')) {
        std::size_t cpos = pos;
        coeff = parse_nat();
        if (coeff == 0) throw ParseError("coefficient 0 rejected", cpos);
      }
      return Ordinal::single(std::move(expo), std::move(coeff));
    }
    return Ordinal::from_int(parse_nat());
  }

  Ordinal parse_ord() {
    Ordinal acc = parse_term();
    while (eat('+')) acc = add(acc, parse_term());
    return acc;
  }
};

bool exponent_is_primary(const Ordinal& e) {
  // Printable without parentheses: a nat, or a single term with coefficient 1
  // whose own exponent is again a primary.
  if (e.is_finite()) return true;
  if (e.terms().size() != 1 || e.terms()[0].coeff != 1) return false;
  return exponent_is_primary(e.terms()[0].exponent);
}

}  // namespace

Ordinal parse_ordinal(const std::string& text) {
  OrdParser p(text);
  Ordinal o = p.parse_ord();
  if (!p.eof()) throw ParseError("trailing input", p.pos);
  return o;
}

std::string format_ordinal(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out << '+';
    first = false;
    if (t.exponent.is_zero()) {
      out << t.coeff;
      continue;
    }
    out << 'w';
    if (t.exponent != Ordinal::from_int(1)) {
      out << '^';
      if (exponent_is_primary(t.exponent)) {
        out << format_ordinal(t.exponent);
      } else {
        out << '(' << format_ordinal(t.exponent) << ')';
      }
    }
    if (t.coeff != 1) out << '*' << t.coeff;
  }
  return out.str();
}

std::string format_rat(const Rat& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << '/' << denominator(r);
  return out.str();
}

Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int q(text.substr(slash + 1));
    if (q == 0) throw ParseError("zero denominator", slash + 1);
    return Rat(Int(text.substr(0, slash)), q);
  } catch (const std::runtime_error&) {
    throw ParseError("bad rational literal '" + text + "'", 0);
  }
}

}  // namespace tel

#include "tel/space.hpp"

#include <sstream>

namespace tel {

PointPath PointPath::ord(Ordinal beta) {
  PointPath p;
  p.kind_ = Kind::Ord;
  p.beta_ = std::move(beta);
  return p;
}
PointPath PointPath::infinity() {
  PointPath p;
  p.kind_ = Kind::AtInfinity;
  return p;
}
PointPath PointPath::in_family(long index, PointPath inner) {
  PointPath p;
  p.kind_ = Kind::InFamily;
  p.index_ = index;
  p.kids_.push_back(std::move(inner));
  return p;
}
PointPath PointPath::pair(PointPath l, PointPath r) {
  PointPath p;
  p.kind_ = Kind::Pair;
  p.kids_.push_back(std::move(l));
  p.kids_.push_back(std::move(r));
  return p;
}

const Ordinal& PointPath::beta() const {
  if (kind_ != Kind::Ord) throw DomainError("point is not an ordinal address");
  return beta_;
}
const PointPath& PointPath::inner() const {
  if (kind_ != Kind::InFamily) throw DomainError("point is not a family address");
  return kids_[0];
}
const PointPath& PointPath::left() const {
  if (kind_ != Kind::Pair) throw DomainError("point is not a pair address");
  return kids_[0];
}
const PointPath& PointPath::right() const {
  if (kind_ != Kind::Pair) throw DomainError("point is not a pair address");
  return kids_[1];
}

bool PointPath::operator==(const PointPath& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Ord:
      return beta_ == o.beta_;
    case Kind::AtInfinity:
      return true;
    case Kind::InFamily:
      return index_ == o.index_ && kids_[0] == o.kids_[0];
    case Kind::Pair:
      return kids_[0] == o.kids_[0] && kids_[1] == o.kids_[1];
  }
  return false;
}

std::string PointPath::format() const {
  switch (kind_) {
    case Kind::Ord:
      return "o:" + format_ordinal(beta_);
    case Kind::AtInfinity:
      return "inf";
    case Kind::InFamily:
      return "in(" + std::to_string(index_) + "," + kids_[0].format() + ")";
    case Kind::Pair:
      return "pair(" + kids_[0].format() + "," + kids_[1].format() + ")";
  }
  return "?";
}

namespace {

struct PointParser {
  const std::string& s;
  std::size_t pos = 0;
  explicit PointParser(const std::string& t) : s(t) {}

  void skip_ws() {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  std::string until_balanced_comma_or_close() {
    skip_ws();
    int depth = 0;
    std::size_t start = pos;
    while (pos < s.size()) {
      char c = s[pos];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) break;
      ++pos;
    }
    return s.substr(start, pos - start);
  }

  PointPath parse() {
    skip_ws();
    if (eat_word("inf")) return PointPath::infinity();
    if (eat_word("in")) {
      if (!eat('(')) throw ParseError("expected '(' after in", pos);
      std::string idx = until_balanced_comma_or_close();
      if (!eat(',')) throw ParseError("expected ','", pos);
      PointPath inner = parse();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return PointPath::in_family(std::stol(idx), std::move(inner));
    }
    if (eat_word("pair")) {
      if (!eat('(')) throw ParseError("expected '(' after pair", pos);
      PointPath l = parse();
      if (!eat(',')) throw ParseError("expected ','", pos);
      PointPath r = parse();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return PointPath::pair(std::move(l), std::move(r));
    }
    if (eat_word("o:")) {
      std::string lit = until_balanced_comma_or_close();
      return PointPath::ord(parse_ordinal(lit));
    }
    throw ParseError("unrecognized point literal", pos);
  }
};

}  // namespace

PointPath PointPath::parse(const std::string& text) {
  PointParser p(text);
  PointPath out = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input in point literal", p.pos);
  return out;
}

SpacePtr omega_space(const Ordinal& alpha, const Int& n) {
  if (n <= 0) throw DomainError("omega_space requires n >= 1");
  auto t = std::make_shared<SpaceTerm>();
  t->kind = SpaceTerm::Kind::Omega;
  t->alpha = alpha;
  t->n = n;
  return t;
}

SpacePtr union_space(SpaceStream stream, long start) {
  auto t = std::make_shared<SpaceTerm>();
  t->kind = SpaceTerm::Kind::Union;
  t->stream = std::move(stream);
  t->start = start;
  // Spot-check the declared rank profile on three members.
  for (long i = start; i < start + 3; ++i) {
    Ordinal declared = t->stream.member_rank(i);
    SpacePtr m = t->stream.member(i);
    Ordinal actual = pred(cb_rank(m));
    if (declared != actual)
      throw HypothesisViolation("union rank profile",
                                "member " + std::to_string(i) + " declared rank " +
                                    format_ordinal(declared) + " but has rank " +
                                    format_ordinal(actual));
  }
  return t;
}

SpacePtr product_space(SpacePtr left, SpacePtr right) {
  auto t = std::make_shared<SpaceTerm>();
  t->kind = SpaceTerm::Kind::Product;
  t->left = std::move(left);
  t->right = std::move(right);
  return t;
}

SpacePtr restrict_space(SpacePtr parent, ClopenSelector sel) {
  if (sel.kind == ClopenSelector::Kind::InitialSegment) {
    if (parent->kind != SpaceTerm::Kind::Omega)
      throw DomainError("initial-segment restriction requires an omega-space parent");
    Ordinal top = nat_mul(omega_pow(parent->alpha), parent->n);
    if (sel.upto > top) throw DomainError("restriction interval exceeds the space");
  } else {
    if (parent->kind != SpaceTerm::Kind::Union)
      throw DomainError("family-index restriction requires a union parent");
    if (sel.indices.empty()) throw DomainError("empty restriction index set");
    for (long i : sel.indices)
      if (i < parent->start) throw DomainError("restriction index below stream start");
  }
  auto t = std::make_shared<SpaceTerm>();
  t->kind = SpaceTerm::Kind::Restrict;
  t->parent = std::move(parent);
  t->sel = std::move(sel);
  return t;
}

PointPath marked_point(const SpacePtr& E) {
  switch (E->kind) {
    case SpaceTerm::Kind::Omega:
      return PointPath::ord(nat_mul(omega_pow(E->alpha), E->n));
    case SpaceTerm::Kind::Union:
      return PointPath::infinity();
    case SpaceTerm::Kind::Product:
      return PointPath::pair(marked_point(E->left), marked_point(E->right));
    case SpaceTerm::Kind::Restrict:
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment) return PointPath::ord(E->sel.upto);
      {
        long last = *E->sel.indices.rbegin();
        return PointPath::in_family(last, marked_point(E->parent->stream.member(last)));
      }
  }
  throw DomainError("bad space term");
}

bool is_member(const SpacePtr& E, const PointPath& x) {
  switch (E->kind) {
    case SpaceTerm::Kind::Omega:
      return x.kind() == PointPath::Kind::Ord &&
             x.beta() <= nat_mul(omega_pow(E->alpha), E->n);
    case SpaceTerm::Kind::Union:
      if (x.kind() == PointPath::Kind::AtInfinity) return true;
      return x.kind() == PointPath::Kind::InFamily && x.index() >= E->start &&
             is_member(E->stream.member(x.index()), x.inner());
    case SpaceTerm::Kind::Product:
      return x.kind() == PointPath::Kind::Pair && is_member(E->left, x.left()) &&
             is_member(E->right, x.right());
    case SpaceTerm::Kind::Restrict:
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment)
        return x.kind() == PointPath::Kind::Ord && x.beta() <= E->sel.upto;
      return x.kind() == PointPath::Kind::InFamily && E->sel.indices.count(x.index()) &&
             is_member(E->parent->stream.member(x.index()), x.inner());
  }
  return false;
}

static Ordinal infinity_rank(const SpaceTerm& t) {
  if (t.stream.tail_kind == SpaceStream::TailRank::EventuallyConstant)
    return add(t.stream.tail_rank, Ordinal::from_int(1));
  return t.stream.tail_rank;
}

Ordinal rank(const SpacePtr& E, const PointPath& x) {
  if (!is_member(E, x)) throw DomainError("rank: point " + x.format() + " is not a member");
  switch (E->kind) {
    case SpaceTerm::Kind::Omega: {
      const Ordinal& b = x.beta();
      if (b.is_zero()) return Ordinal();
      return b.last_exp();
    }
    case SpaceTerm::Kind::Union:
      if (x.kind() == PointPath::Kind::AtInfinity) return infinity_rank(*E);
      return rank(E->stream.member(x.index()), x.inner());
    case SpaceTerm::Kind::Product:
      return natural_sum(rank(E->left, x.left()), rank(E->right, x.right()));
    case SpaceTerm::Kind::Restrict:
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment) {
        const Ordinal& b = x.beta();
        return b.is_zero() ? Ordinal() : b.last_exp();
      }
      return rank(E->parent->stream.member(x.index()), x.inner());
  }
  throw DomainError("bad space term");
}

bool is_isolated(const SpacePtr& E, const PointPath& x) { return rank(E, x).is_zero(); }

// (max point rank, number of points attaining it)
static std::pair<Ordinal, Int> max_rank_count(const SpacePtr& E) {
  switch (E->kind) {
    case SpaceTerm::Kind::Omega:
      if (E->alpha.is_zero()) return {Ordinal(), E->n + 1};  // all n+1 points isolated
      return {E->alpha, E->n};
    case SpaceTerm::Kind::Union: {
      Ordinal inf_r = infinity_rank(*E);
      Ordinal best = inf_r;
      Int count = 1;
      // Probe the declared prefix; the tail profile covers the rest (tail member
      // ranks stay strictly below the infinity rank by construction).
      for (long i = E->start; i < E->start + std::max<long>(E->stream.prefix_len, 1); ++i) {
        auto [r, c] = max_rank_count(E->stream.member(i));
        if (r > best) {
          best = r;
          count = c;  // the infinity point no longer attains the max
        } else if (r == best) {
          count += c;
        }
      }
      return {best, count};
    }
    case SpaceTerm::Kind::Product: {
      auto [rl, cl] = max_rank_count(E->left);
      auto [rr, cr] = max_rank_count(E->right);
      return {natural_sum(rl, rr), cl * cr};
    }
    case SpaceTerm::Kind::Restrict:
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment) {
        const Ordinal& b = E->sel.upto;
        if (b.is_zero()) return {Ordinal(), 1};
        if (b.is_finite()) return {Ordinal(), b.as_int() + 1};
        // leading CNF term of the right endpoint determines the top stratum
        Ordinal g = b.leading_exp();
        return {g, b.terms()[0].coeff};
      } else {
        Ordinal best;
        Int count = 0;
        bool first = true;
        for (long i : E->sel.indices) {
          auto [r, c] = max_rank_count(E->parent->stream.member(i));
          if (first || r > best) {
            best = r;
            count = c;
            first = false;
          } else if (r == best) {
            count += c;
          }
        }
        return {best, count};
      }
  }
  throw DomainError("bad space term");
}

Ordinal cb_rank(const SpacePtr& E) {
  return add(max_rank_count(E).first, Ordinal::from_int(1));
}

Int top_rank_count(const SpacePtr& E) { return max_rank_count(E).second; }

std::pair<Ordinal, Int> canonical_class(const SpacePtr& E) {
  auto [r, c] = max_rank_count(E);
  return {add(r, Ordinal::from_int(1)), c};
}

Ordinal alpha0_rank_bound(const SpacePtr& E, const PointPath& x) {
  Ordinal r = rank(E, x);
  if (r.is_finite()) return r;
  return add(r, Ordinal::from_int(1));
}

Ordinal rho(const SpacePtr& E) {
  Ordinal cb = cb_rank(E);
  if (cb.is_finite()) return pred(cb);
  return cb;
}

TailBasis tail_basis(const SpacePtr& E, const PointPath& x, long i) {
  if (is_isolated(E, x)) throw DomainError("tail_basis: point is isolated, basis is {x}");
  switch (E->kind) {
    case SpaceTerm::Kind::Omega: {
      Ordinal lo = fundamental_seq(x.beta(), Int(i));
      Ordinal hi = x.beta();
      return TailBasis{"]" + format_ordinal(lo) + ", " + format_ordinal(hi) + "]",
                       [lo, hi](const PointPath& y) {
                         return y.kind() == PointPath::Kind::Ord && y.beta() > lo &&
                                y.beta() <= hi;
                       }};
    }
    case SpaceTerm::Kind::Union: {
      if (x.kind() == PointPath::Kind::AtInfinity) {
        return TailBasis{"{inf} + families with index > " + std::to_string(i),
                         [i](const PointPath& y) {
                           if (y.kind() == PointPath::Kind::AtInfinity) return true;
                           return y.kind() == PointPath::Kind::InFamily && y.index() > i;
                         }};
      }
      long idx = x.index();
      TailBasis inner = tail_basis(E->stream.member(idx), x.inner(), i);
      return TailBasis{"in(" + std::to_string(idx) + ", " + inner.describe + ")",
                       [idx, inner](const PointPath& y) {
                         return y.kind() == PointPath::Kind::InFamily && y.index() == idx &&
                                inner.contains(y.inner());
                       }};
    }
    case SpaceTerm::Kind::Product: {
      bool liso = is_isolated(E->left, x.left());
      bool riso = is_isolated(E->right, x.right());
      TailBasis lb = liso ? TailBasis{"{" + x.left().format() + "}",
                                      [p = x.left()](const PointPath& y) { return y == p; }}
                          : tail_basis(E->left, x.left(), i);
      TailBasis rb = riso ? TailBasis{"{" + x.right().format() + "}",
                                      [p = x.right()](const PointPath& y) { return y == p; }}
                          : tail_basis(E->right, x.right(), i);
      return TailBasis{lb.describe + " x " + rb.describe,
                       [lb, rb](const PointPath& y) {
                         return y.kind() == PointPath::Kind::Pair && lb.contains(y.left()) &&
                                rb.contains(y.right());
                       }};
    }
    case SpaceTerm::Kind::Restrict: {
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment) {
        Ordinal lo = fundamental_seq(x.beta(), Int(i));
        Ordinal hi = x.beta();
        return TailBasis{"]" + format_ordinal(lo) + ", " + format_ordinal(hi) + "]",
                         [lo, hi](const PointPath& y) {
                           return y.kind() == PointPath::Kind::Ord && y.beta() > lo &&
                                  y.beta() <= hi;
                         }};
      }
      long idx = x.index();
      TailBasis inner = tail_basis(E->parent->stream.member(idx), x.inner(), i);
      return TailBasis{"in(" + std::to_string(idx) + ", " + inner.describe + ")",
                       [idx, inner](const PointPath& y) {
                         return y.kind() == PointPath::Kind::InFamily && y.index() == idx &&
                                inner.contains(y.inner());
                       }};
    }
  }
  throw DomainError("bad space term");
}

bool subset_contains(const SpacePtr& T, const MarkedSubset& X, const PointPath& t) {
  switch (X.kind) {
    case MarkedSubset::Kind::IsolatedPoints:
      return is_isolated(T, t);
    case MarkedSubset::Kind::ComplementOfFinite:
      for (const auto& p : X.removed)
        if (p == t) return false;
      return true;
    case MarkedSubset::Kind::ExplicitUnion: {
      for (const auto& [sel, base] : X.pieces) {
        bool in_piece = false;
        if (sel.kind == ClopenSelector::Kind::InitialSegment) {
          in_piece = t.kind() == PointPath::Kind::Ord && t.beta() <= sel.upto;
        } else {
          in_piece = t.kind() == PointPath::Kind::InFamily && sel.indices.count(t.index());
        }
        if (in_piece) {
          MarkedSubset sub{base, X.removed, {}};
          return subset_contains(T, sub, t);
        }
      }
      return false;
    }
  }
  return false;
}

// Relative derivatives in these scattered spaces admit closed rules:
//  - X = all isolated points: every accumulation point of T is a limit of
//    isolated points, and Gamma_X^1 contains no point of X, so the chain is
//    T, Gamma^1(T), empty.
//  - X = complement of a finite set: removing finitely many points changes no
//    accumulation set, so the relative chain equals the absolute chain.
Ordinal relative_rank(const SpacePtr& T, const MarkedSubset& X, const PointPath& t) {
  if (!is_member(T, t)) throw DomainError("relative_rank: not a member");
  switch (X.kind) {
    case MarkedSubset::Kind::IsolatedPoints:
      return is_isolated(T, t) ? Ordinal() : Ordinal::from_int(1);
    case MarkedSubset::Kind::ComplementOfFinite:
      return rank(T, t);
    case MarkedSubset::Kind::ExplicitUnion: {
      for (const auto& [sel, base] : X.pieces) {
        bool in_piece = false;
        if (sel.kind == ClopenSelector::Kind::InitialSegment)
          in_piece = t.kind() == PointPath::Kind::Ord && t.beta() <= sel.upto;
        else
          in_piece = t.kind() == PointPath::Kind::InFamily && sel.indices.count(t.index());
        if (in_piece) {
          MarkedSubset sub{base, X.removed, {}};
          return relative_rank(T, sub, t);
        }
      }
      // The pieces are clopen, so points outside all of them are never
      // accumulation points of X.
      return Ordinal();
    }
  }
  throw DomainError("bad subset");
}

Ordinal relative_cb_rank(const SpacePtr& T, const MarkedSubset& X) {
  switch (X.kind) {
    case MarkedSubset::Kind::IsolatedPoints: {
      // Gamma_X^1 = accumulation set; Gamma_X^2 = empty (when T has limits)
      Ordinal cb = cb_rank(T);
      if (cb == Ordinal::from_int(1)) return Ordinal::from_int(1);  // discrete
      return Ordinal::from_int(2);
    }
    case MarkedSubset::Kind::ComplementOfFinite:
      return cb_rank(T);
    case MarkedSubset::Kind::ExplicitUnion: {
      Ordinal best = Ordinal::from_int(1);
      // clopen pieces do not interact; the stabilization stage is the max
      for (const auto& [sel, base] : X.pieces) {
        Ordinal piece_cb = base == MarkedSubset::Kind::IsolatedPoints
                               ? Ordinal::from_int(2)
                               : cb_rank(restrict_space(T, sel));
        if (piece_cb > best) best = piece_cb;
      }
      return best;
    }
  }
  throw DomainError("bad subset");
}

namespace {

struct SpaceParser {
  const std::string& s;
  std::size_t pos = 0;
  long stream_index = -1;  // >= 0 when parsing a union template with symbolic n
  explicit SpaceParser(const std::string& t) : s(t) {}

  void skip_ws() {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  std::string arg() {
    skip_ws();
    int depth = 0;
    std::size_t start = pos;
    while (pos < s.size()) {
      char c = s[pos];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) break;
      ++pos;
    }
    std::string out = s.substr(start, pos - start);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
  }
};

SpacePtr parse_space_inner(SpaceParser& p);

// template slot: "n" stands for the stream index
Ordinal parse_template_ordinal(const std::string& lit, long n) {
  if (lit == "n") return Ordinal::from_int(n);
  return parse_ordinal(lit);
}
Int parse_template_nat(const std::string& lit, long n) {
  if (lit == "n") return Int(n);
  return Int(lit);
}

SpacePtr parse_space_inner(SpaceParser& p) {
  p.skip_ws();
  if (p.eat_word("omega")) {
    if (!p.eat('(')) throw ParseError("expected '(' after omega", p.pos);
    std::string a = p.arg();
    if (!p.eat(',')) throw ParseError("expected ','", p.pos);
    std::string nn = p.arg();
    if (!p.eat(')')) throw ParseError("expected ')'", p.pos);
    if (p.stream_index >= 0)
      return omega_space(parse_template_ordinal(a, p.stream_index),
                         parse_template_nat(nn, p.stream_index));
    return omega_space(parse_ordinal(a), Int(nn));
  }
  if (p.eat_word("prod")) {
    if (!p.eat('(')) throw ParseError("expected '(' after prod", p.pos);
    SpacePtr l = parse_space_inner(p);
    if (!p.eat(',')) throw ParseError("expected ','", p.pos);
    SpacePtr r = parse_space_inner(p);
    if (!p.eat(')')) throw ParseError("expected ')'", p.pos);
    return product_space(std::move(l), std::move(r));
  }
  if (p.eat_word("union")) {
    if (!p.eat('(')) throw ParseError("expected '(' after union", p.pos);
    std::string templ = p.arg();
    long from = 1;
    if (p.eat(',')) {
      if (!p.eat_word("from=")) throw ParseError("expected from=N", p.pos);
      from = std::stol(p.arg());
    }
    if (!p.eat(')')) throw ParseError("expected ')'", p.pos);
    auto make = [templ](long i) {
      SpaceParser q(templ);
      q.stream_index = i;
      return parse_space_inner(q);
    };
    auto rank_of = [make](long i) { return pred(cb_rank(make(i))); };
    // Template streams: the rank profile is affine in the index; read it off
    // three probes and take the supremum of the closed form.
    Ordinal r0 = rank_of(from), r1 = rank_of(from + 1), r2 = rank_of(from + 2);
    SpaceStream st;
    st.member = make;
    st.member_rank = rank_of;
    if (r0 == r1 && r1 == r2) {
      st.tail_kind = SpaceStream::TailRank::EventuallyConstant;
      st.tail_rank = r0;
    } else if (r0 < r1 && r1 < r2) {
      Ordinal d1 = left_subtract(r0, r1);
      Ordinal d2 = left_subtract(r1, r2);
      if (d1 != d2) throw DomainError("union template rank profile not affine in the index");
      st.tail_kind = SpaceStream::TailRank::StrictIncreasingToSup;
      // sup_i (r0 + d*i) = r0 + d*omega, and d*omega = w^{leadexp(d)+1}
      st.tail_rank = add(r0, omega_pow(add(d1.leading_exp(), Ordinal::from_int(1))));
    } else {
      throw DomainError("union template rank profile is neither constant nor increasing");
    }
    return union_space(std::move(st), from);
  }
  throw ParseError("unrecognized space literal", p.pos);
}

}  // namespace

SpacePtr parse_space(const std::string& text) {
  SpaceParser p(text);
  SpacePtr out = parse_space_inner(p);
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input in space literal", p.pos);
  return out;
}

std::string format_space(const SpacePtr& E) {
  switch (E->kind) {
    case SpaceTerm::Kind::Omega:
      return "omega(" + format_ordinal(E->alpha) + "," + E->n.str() + ")";
    case SpaceTerm::Kind::Union:
      return "union(<stream>, from=" + std::to_string(E->start) + ")";
    case SpaceTerm::Kind::Product:
      return "prod(" + format_space(E->left) + "," + format_space(E->right) + ")";
    case SpaceTerm::Kind::Restrict: {
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment)
        return "restrict(" + format_space(E->parent) + ", [0," + format_ordinal(E->sel.upto) +
               "])";
      std::ostringstream out;
      out << "restrict(" << format_space(E->parent) << ", {";
      bool first = true;
      for (long i : E->sel.indices) {
        if (!first) out << ",";
        out << i;
        first = false;
      }
      out << "})";
      return out.str();
    }
  }
  return "?";
}

}  // namespace tel

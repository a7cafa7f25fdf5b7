#include "tel/candidate.hpp"

#include <sstream>

#include "json.hpp"

namespace tel {

namespace {

SpaceStream space_stream_of(const UnionStream& us, long start) {
  SpaceStream st;
  switch (us.kind) {
    case UnionStream::Kind::FiniteThenConstant: {
      auto prefix = us.prefix;
      auto tail = us.tail;
      st.member = [prefix, tail, start](long i) {
        std::size_t off = static_cast<std::size_t>(i - start);
        return off < prefix.size() ? prefix[off]->space : tail->space;
      };
      st.member_rank = [st_member = st.member](long i) { return pred(cb_rank(st_member(i))); };
      st.tail_kind = SpaceStream::TailRank::EventuallyConstant;
      st.tail_rank = pred(cb_rank(tail->space));
      st.prefix_len = static_cast<long>(prefix.size()) + 1;
      break;
    }
    case UnionStream::Kind::ScaledCopies: {
      SpacePtr base_space = us.base->space;
      st.member = [base_space](long) { return base_space; };
      Ordinal r = pred(cb_rank(base_space));
      st.member_rank = [r](long) { return r; };
      st.tail_kind = SpaceStream::TailRank::EventuallyConstant;
      st.tail_rank = r;
      st.prefix_len = 1;
      break;
    }
    case UnionStream::Kind::PowerTower: {
      SpacePtr base_space = us.base->space;
      st.member = [base_space](long i) {
        SpacePtr acc = base_space;
        for (long j = 1; j < i; ++j) acc = product_space(acc, base_space);
        return acc;
      };
      Ordinal r = pred(cb_rank(base_space));
      st.member_rank = [r](long i) { return nat_mul(r, Int(i)); };
      st.tail_kind = SpaceStream::TailRank::StrictIncreasingToSup;
      if (!is_irreducible(r))
        throw HypothesisViolation("power stream", "base space rank must be irreducible");
      st.tail_rank = omega_pow(add(r.leading_exp(), Ordinal::from_int(1)));
      st.prefix_len = 1;
      break;
    }
    case UnionStream::Kind::Realized: {
      auto make = us.make;
      st.member = [make](long i) { return make(i)->space; };
      st.member_rank = [make](long i) { return pred(cb_rank(make(i)->space)); };
      st.tail_kind = SpaceStream::TailRank::StrictIncreasingToSup;
      st.tail_rank = us.scale_sup;
      st.prefix_len = 3;
      break;
    }
  }
  return st;
}

}  // namespace

TermPtr base_step(const Rat& a) {
  if (a <= 0) throw DomainError("base_step requires a > 0");
  auto t = std::make_shared<CandidateTerm>();
  t->kind = CandidateTerm::Kind::BaseStep;
  t->space = omega_space(Ordinal::from_int(1), 1);
  t->a = a;
  t->bound = a;
  return t;
}

TermPtr scaled(TermPtr H, const Rat& c) {
  if (c <= 0) throw DomainError("scaling factor must be positive");
  if (c == 1) return H;
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      return base_step(H->a * c);
    case CandidateTerm::Kind::Product:
      return product(scaled(H->left, c), scaled(H->right, c));
    case CandidateTerm::Kind::RenormPower:
      return renorm_power(scaled(H->inner, c), H->power);
    case CandidateTerm::Kind::Restrict:
      return restrict_candidate(scaled(H->inner, c), H->sel);
    case CandidateTerm::Kind::EmbedZero:
      return H->slot == 0 ? H : embed_zero(scaled(H->inner, c), H->host);
    case CandidateTerm::Kind::MarkedDelay:
      return marked_delay(scaled(H->inner, c), H->delay * c);
    case CandidateTerm::Kind::Union: {
      UnionStream st = H->stream;
      switch (st.kind) {
        case UnionStream::Kind::FiniteThenConstant:
          for (auto& m : st.prefix) m = scaled(m, c);
          if (st.tail && st.tail->bound != 0) st.tail = scaled(st.tail, c);
          break;
        case UnionStream::Kind::ScaledCopies:
          st.scale = st.scale.scaled(c);
          break;
        case UnionStream::Kind::PowerTower:
          st.amp = st.amp.scaled(c);
          break;
        case UnionStream::Kind::Realized: {
          auto make = st.make;
          st.make = [make, c](long i) { return scaled(make(i), c); };
          break;
        }
      }
      st.norm_h = st.norm_h.scaled(c);
      return union_candidate(std::move(st), H->start);
    }
  }
  throw DomainError("bad candidate term");
}

TermPtr stream_member(const CandidateTerm& u, long n) {
  const CandidateTerm& uu = u.kind == CandidateTerm::Kind::MarkedDelay ? *u.inner : u;
  if (uu.kind != CandidateTerm::Kind::Union) throw DomainError("not a union term");
  const UnionStream& us = uu.stream;
  if (n < uu.start) throw DomainError("member index below stream start");
  switch (us.kind) {
    case UnionStream::Kind::FiniteThenConstant: {
      std::size_t off = static_cast<std::size_t>(n - uu.start);
      return off < us.prefix.size() ? us.prefix[off] : us.tail;
    }
    case UnionStream::Kind::ScaledCopies:
      return scaled(us.base, us.scale.eval(n));
    case UnionStream::Kind::PowerTower:
      return renorm_power(scaled(us.base, us.amp.eval(n)), n);
    case UnionStream::Kind::Realized:
      return us.make(n);
  }
  throw DomainError("bad stream");
}

TermPtr union_candidate(UnionStream stream, long start) {
  auto t = std::make_shared<CandidateTerm>();
  t->kind = CandidateTerm::Kind::Union;
  t->stream = std::move(stream);
  t->start = start;
  t->space = union_space(space_stream_of(t->stream, start), start);
  // Declared ||h^n|| must tend to 0 (disjoint-union lemma hypothesis); the
  // declared limit is validated structurally and spot-checked on two members.
  if (t->stream.kind != UnionStream::Kind::FiniteThenConstant) {
    if (t->stream.norm_h.limit() != 0)
      throw HypothesisViolation("disjoint union", "||h^n|| does not tend to 0");
    for (long i = start; i < start + 2; ++i) {
      TermPtr m = stream_member(*t, i);
      Rat declared = t->stream.norm_h.eval(i);
      // template streams declare the norms exactly; realized streams declare
      // the per-member budgets, which bound the norms from above
      bool ok = t->stream.kind == UnionStream::Kind::Realized ? declared >= m->bound
                                                              : declared == m->bound;
      if (!ok)
        throw HypothesisViolation("disjoint union",
                                  "declared ||h^n|| mismatch at member " + std::to_string(i));
    }
  } else {
    if (!t->stream.tail || t->stream.tail->bound != 0)
      throw HypothesisViolation(
          "disjoint union", "||h^n|| does not tend to 0: the constant tail has nonzero bound");
  }
  Rat b = 0;
  if (t->stream.kind == UnionStream::Kind::FiniteThenConstant) {
    for (const auto& m : t->stream.prefix) b = std::max(b, m->bound);
    b = std::max(b, t->stream.tail->bound);
  } else {
    b = t->stream.norm_h.sup_after(start - 1);
  }
  t->bound = b;
  return t;
}

TermPtr product(TermPtr F, TermPtr G) {
  auto t = std::make_shared<CandidateTerm>();
  t->kind = CandidateTerm::Kind::Product;
  t->space = product_space(F->space, G->space);
  t->bound = std::max(F->bound, G->bound);
  // u.s.c.d. preservation needs (lim G)(0_2) = 0.
  Rat glim = eval_limit(G, marked_point(G->space));
  t->uscd = F->uscd && G->uscd;
  if (glim != 0)
    throw HypothesisViolation("product", "(lim right)(marked) = " + format_rat(glim) +
                                             " but must be 0 for u.s.c. differences");
  t->left = std::move(F);
  t->right = std::move(G);
  return t;
}

TermPtr renorm_power(TermPtr F, long p) {
  if (p < 1) throw DomainError("renorm_power requires p >= 1");
  auto t = std::make_shared<CandidateTerm>();
  t->kind = CandidateTerm::Kind::RenormPower;
  t->power = p;
  TermPtr chain = F;
  for (long j = 1; j < p; ++j) chain = product(chain, F);
  t->expansion = scaled(chain, Rat(Int(1), Int(p)));
  t->space = t->expansion->space;
  t->bound = t->expansion->bound;
  t->uscd = t->expansion->uscd;
  t->inner = std::move(F);
  return t;
}

TermPtr restrict_candidate(TermPtr H, ClopenSelector sel) {
  auto t = std::make_shared<CandidateTerm>();
  t->kind = CandidateTerm::Kind::Restrict;
  t->space = restrict_space(H->space, sel);
  t->bound = H->bound;
  t->uscd = H->uscd;  // clopen restriction of u.s.c. differences stays u.s.c.
  t->sel = std::move(sel);
  t->inner = std::move(H);
  return t;
}

TermPtr marked_delay(TermPtr U, const Rat& c) {
  if (U->kind != CandidateTerm::Kind::Union)
    throw DomainError("marked_delay applies to a union term");
  if (c <= 0) throw HypothesisViolation("marked delay", "requires c > 0");
  auto t = std::make_shared<CandidateTerm>();
  t->kind = CandidateTerm::Kind::MarkedDelay;
  t->space = U->space;
  t->bound = std::max(U->bound, c);
  t->uscd = U->uscd;
  t->delay = c;
  t->inner = std::move(U);
  return t;
}

TermPtr embed_zero(TermPtr H, SpacePtr host) {
  auto t = std::make_shared<CandidateTerm>();
  t->kind = CandidateTerm::Kind::EmbedZero;
  t->host = host;
  if (!H) {  // the zero candidate on the host itself
    t->space = host;
    t->bound = 0;
    t->slot = 0;
    return t;
  }
  auto [cb_host, n_host] = canonical_class(host);
  auto [cb_in, n_in] = canonical_class(H->space);
  if (cb_in > cb_host)
    throw HypothesisViolation(
        "embedding", "no clopen copy: inner class " + format_ordinal(cb_in) +
                         " exceeds host class " + format_ordinal(cb_host));
  Ordinal A = pred(cb_host);
  Ordinal gP = pred(cb_in);
  if (gP == A && n_host == 1) return H;  // the whole host is the clopen copy
  // One-point union with the inner copy in slot 1, rank-A filler copies, and a
  // tail stream arranged so the compactification point completes the class of
  // the host (identity-on-families up to the canonical classification).
  enum class Tail { Zero, ConstBelow, Increasing };
  Tail tail_mode;
  long fillers;
  SpaceStream st;
  if (gP == A) {
    tail_mode = Tail::Zero;  // infinity point must stay below rank A...
    fillers = static_cast<long>(n_host) - (A == Ordinal::from_int(1) ? 2 : 1);
    st.tail_kind = SpaceStream::TailRank::EventuallyConstant;
    st.tail_rank = Ordinal();  // ...except at A = 1 where it is the n-th rank-1 point
  } else if (is_successor(A)) {
    tail_mode = Tail::ConstBelow;
    fillers = static_cast<long>(n_host) - 1;
    st.tail_kind = SpaceStream::TailRank::EventuallyConstant;
    st.tail_rank = pred(A);
  } else {
    tail_mode = Tail::Increasing;
    fillers = static_cast<long>(n_host) - 1;
    st.tail_kind = SpaceStream::TailRank::StrictIncreasingToSup;
    st.tail_rank = A;
  }
  SpacePtr inner_space = H->space;
  SpacePtr filler = omega_space(A, 1);
  st.member = [inner_space, filler, fillers, A, tail_mode](long i) -> SpacePtr {
    if (i == 1) return inner_space;
    if (i <= 1 + fillers) return filler;
    long j = i - 1 - fillers;
    switch (tail_mode) {
      case Tail::Zero:
        return omega_space(Ordinal(), 1);
      case Tail::ConstBelow:
        return omega_space(pred(A), j);
      case Tail::Increasing:
        return omega_space(fundamental_seq(A, std::max<long>(j, 1)), 1);
    }
    return nullptr;
  };
  st.member_rank = [gP, fillers, A, tail_mode](long i) -> Ordinal {
    if (i == 1) return gP;
    if (i <= 1 + fillers) return A;
    long j = i - 1 - fillers;
    switch (tail_mode) {
      case Tail::Zero:
        return Ordinal();
      case Tail::ConstBelow:
        return pred(A);
      case Tail::Increasing:
        return fundamental_seq(A, std::max<long>(j, 1));
    }
    return Ordinal();
  };
  st.prefix_len = 1 + fillers;
  t->space = union_space(std::move(st), 1);
  t->bound = H->bound;
  t->uscd = H->uscd;
  t->slot = 1;
  t->inner = std::move(H);
  auto got = canonical_class(t->space);
  if (got.first != cb_host || got.second != n_host)
    throw DomainError("embedding space class mismatch: got (" + format_ordinal(got.first) +
                      "," + got.second.str() + ") want (" + format_ordinal(cb_host) + "," +
                      n_host.str() + ")");
  return t;
}

// ---------------------------------------------------------------------------
// pointwise evaluation

KValue eval_h_kv(const TermPtr& H, const PointPath& x) {
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep: {
      if (!is_member(H->space, x)) throw DomainError("eval: not a member: " + x.format());
      const Ordinal& b = x.beta();
      if (!b.is_finite()) return KValue::constant(Rat(0));  // marked point
      long m = static_cast<long>(b.as_int());
      return KValue::threshold(m + 1, Rat(0), H->a);
    }
    case CandidateTerm::Kind::RenormPower:
      return eval_h_kv(H->expansion, x);
    case CandidateTerm::Kind::Union: {
      if (x.kind() == PointPath::Kind::AtInfinity) return KValue::constant(Rat(0));
      if (x.kind() != PointPath::Kind::InFamily || x.index() < H->start)
        throw DomainError("eval: not a member: " + x.format());
      return eval_h_kv(stream_member(*H, x.index()), x.inner());
    }
    case CandidateTerm::Kind::MarkedDelay: {
      if (x.kind() == PointPath::Kind::InFamily) {
        TermPtr m = stream_member(*H, x.index());
        if (x.inner() == marked_point(m->space))
          return KValue::threshold(x.index() + 1, Rat(0), H->delay);
      }
      return eval_h_kv(H->inner, x);
    }
    case CandidateTerm::Kind::Product: {
      if (x.kind() != PointPath::Kind::Pair) throw DomainError("eval: not a member: " + x.format());
      if (x.right() == marked_point(H->right->space)) return eval_h_kv(H->left, x.left());
      return eval_h_kv(H->right, x.right());
    }
    case CandidateTerm::Kind::Restrict:
      if (!is_member(H->space, x)) throw DomainError("eval: not a member: " + x.format());
      return eval_h_kv(H->inner, x);
    case CandidateTerm::Kind::EmbedZero: {
      if (H->slot == 0) {
        if (!is_member(H->space, x)) throw DomainError("eval: not a member: " + x.format());
        return KValue::constant(Rat(0));
      }
      if (x.kind() == PointPath::Kind::InFamily && x.index() == H->slot)
        return eval_h_kv(H->inner, x.inner());
      if (!is_member(H->space, x)) throw DomainError("eval: not a member: " + x.format());
      return KValue::constant(Rat(0));
    }
  }
  throw DomainError("bad candidate term");
}

Rat eval_h(const TermPtr& H, long k, const PointPath& x) { return eval_h_kv(H, x).at(k); }
Rat eval_limit(const TermPtr& H, const PointPath& x) { return eval_h_kv(H, x).tail(); }

KValue eval_tau_kv(const TermPtr& H, const PointPath& x) {
  KValue hv = eval_h_kv(H, x);
  Rat lim = hv.tail();
  return hv.scaled(Rat(-1)).shifted(lim);
}

Rat eval_tau(const TermPtr& H, long k, const PointPath& x) { return eval_tau_kv(H, x).at(k); }

// ---------------------------------------------------------------------------
// h-level norms and tail suprema (no transfinite content; used by the
// envelope surface and the u.s.c.d. probes)

namespace {

// ||tau_k|| over the whole space, as a KValue in k.
KValue tau_norm_kv(const TermPtr& H);

// member-indexed ||tau_k|| bundle of a union (k fixed large; thresholds in k
// vanish in the tail regime). Exceptions are exact per-member norms.
SeqBundle tau_norm_bundle(const CandidateTerm& u) {
  const CandidateTerm& uu = u.kind == CandidateTerm::Kind::MarkedDelay ? *u.inner : u;
  const UnionStream& us = uu.stream;
  SeqBundle out;
  out.tail_from = uu.start;
  switch (us.kind) {
    case UnionStream::Kind::FiniteThenConstant: {
      for (std::size_t i = 0; i < us.prefix.size(); ++i)
        out.exceptions.emplace_back(uu.start + static_cast<long>(i),
                                    tau_norm_kv(us.prefix[i]).tail());
      out.tail_from = uu.start + static_cast<long>(us.prefix.size());
      out.branches.push_back(RationalSeq::constant(tau_norm_kv(us.tail).tail()));
      break;
    }
    case UnionStream::Kind::ScaledCopies:
      out.branches.push_back(us.scale.scaled(tau_norm_kv(us.base).tail()));
      break;
    case UnionStream::Kind::PowerTower: {
      // member tau is (amp(n)/n) * base-chain tau; the chain's sup equals the
      // base's sup (tau reads one coordinate)
      Rat unit = tau_norm_kv(us.base).tail();
      RationalSeq unit_over_n(Poly::constant(numerator(unit)),
                              Poly{{Int(0), denominator(unit)}}, 1);
      out.branches.push_back(seq_mul(us.amp, unit_over_n));
      break;
    }
    case UnionStream::Kind::Realized:
      for (long i = uu.start; i < uu.start + 3; ++i)
        out.exceptions.emplace_back(i, tau_norm_kv(us.make(i)).tail());
      out.tail_from = uu.start + 3;
      break;
  }
  if (u.kind == CandidateTerm::Kind::MarkedDelay) {
    // the delayed marked points contribute tau = c for k <= n, so c survives
    // every tail
    out.branches.push_back(RationalSeq::constant(u.delay));
  }
  return out;
}

KValue tau_norm_kv(const TermPtr& H) {
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      // free finite coordinate m >= k keeps tau at its full height
      return KValue::constant(H->a);
    case CandidateTerm::Kind::RenormPower:
      return tau_norm_kv(H->expansion);
    case CandidateTerm::Kind::Product:
      return kmax(tau_norm_kv(H->left), tau_norm_kv(H->right));
    case CandidateTerm::Kind::Restrict: {
      if (H->sel.kind == ClopenSelector::Kind::FamilyIndexSet) {
        KValue best = KValue::constant(Rat(0));
        for (long i : H->sel.indices) best = kmax(best, tau_norm_kv(stream_member(*H->inner, i)));
        return best;
      }
      return tau_norm_kv(H->inner);  // initial segments keep the free coordinates
    }
    case CandidateTerm::Kind::EmbedZero:
      return H->slot == 0 ? KValue::constant(Rat(0)) : tau_norm_kv(H->inner);
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay: {
      SeqBundle b = tau_norm_bundle(*H);
      const CandidateTerm& uu =
          H->kind == CandidateTerm::Kind::MarkedDelay ? *H->inner : *H;
      return KValue::constant(b.sup_after(uu.start - 1));
    }
  }
  throw DomainError("bad candidate term");
}

std::optional<Rat> tau_tail_sup(const TermPtr& H, const PointPath& x);

std::optional<Rat> tau_tail_sup(const TermPtr& H, const PointPath& x) {
  if (is_isolated(H->space, x)) return std::nullopt;
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      return H->a;  // sup over late integer tails
    case CandidateTerm::Kind::RenormPower:
      return tau_tail_sup(H->expansion, x);
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay: {
      if (x.kind() == PointPath::Kind::AtInfinity) {
        return tau_norm_bundle(*H).limsup();
      }
      TermPtr m = stream_member(*H, x.index());
      return tau_tail_sup(m, x.inner());  // tau below a member marked point is unchanged
    }
    case CandidateTerm::Kind::Product: {
      std::optional<Rat> best;
      const PointPath& s = x.left();
      const PointPath& t = x.right();
      PointPath mg = marked_point(H->right->space);
      if (!is_isolated(H->right->space, t)) {
        auto v = tau_tail_sup(H->right, t);
        if (v) best = best ? std::max(*best, *v) : *v;
      }
      if (!is_isolated(H->left->space, s)) {
        if (t == mg) {
          auto v = tau_tail_sup(H->left, s);
          if (v) best = best ? std::max(*best, *v) : *v;
        } else {
          Rat v = eval_tau_kv(H->right, t).tail();  // constant along the s-direction
          best = best ? std::max(*best, v) : v;
        }
      }
      return best;
    }
    case CandidateTerm::Kind::Restrict:
      return tau_tail_sup(H->inner, x);
    case CandidateTerm::Kind::EmbedZero: {
      if (H->slot == 0) return Rat(0);
      if (x.kind() == PointPath::Kind::InFamily && x.index() == H->slot)
        return tau_tail_sup(H->inner, x.inner());
      return Rat(0);  // zero off the image; infinity sees vanishing member norms
    }
  }
  throw DomainError("bad candidate term");
}

}  // namespace

PointFn const_fn(const SpacePtr& E, const Rat& c) {
  return PointFn{c < 0 ? -c : c, [c](const PointPath&) { return c; },
                 [c, E](const PointPath& x) -> std::optional<Rat> {
                   if (is_isolated(E, x)) return std::nullopt;
                   return c;
                 }};
}

PointFn indicator_fn(const SpacePtr& E, const PointPath& at, const Rat& value) {
  return PointFn{value < 0 ? -value : value,
                 [at, value](const PointPath& x) { return x == at ? value : Rat(0); },
                 [E, at](const PointPath& x) -> std::optional<Rat> {
                   if (is_isolated(E, x)) return std::nullopt;
                   // punctured late tails eventually avoid the single point `at`
                   // unless at == x, which is excluded anyway
                   return Rat(0);
                 }};
}

PointFn tau_fn(const TermPtr& H, long k) {
  return PointFn{H->bound, [H, k](const PointPath& x) { return eval_tau(H, k, x); },
                 [H, k](const PointPath& x) -> std::optional<Rat> {
                   if (is_isolated(H->space, x)) return std::nullopt;
                   // thresholds in k survive along free coordinates; the
                   // tau tail sup is k-independent for the terms here
                   (void)k;
                   return tau_tail_sup(H, x);
                 }};
}

namespace {

std::optional<Rat> diff_tail_sup(const TermPtr& H, long k, const PointPath& x) {
  if (is_isolated(H->space, x)) return std::nullopt;
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      return Rat(0);  // the single jump at m = k leaves every late tail
    case CandidateTerm::Kind::RenormPower:
      return diff_tail_sup(H->expansion, k, x);
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay: {
      if (x.kind() != PointPath::Kind::AtInfinity)
        return diff_tail_sup(stream_member(*H, x.index()), k, x.inner());
      // ||h_{k+1} - h_k|| <= ||h^n|| on member n tends to 0; delayed marked
      // points contribute the single n = k jump which leaves late tails
      return Rat(0);
    }
    case CandidateTerm::Kind::Product: {
      std::optional<Rat> best;
      const PointPath& s = x.left();
      const PointPath& t = x.right();
      PointPath mg = marked_point(H->right->space);
      if (!is_isolated(H->right->space, t)) {
        auto v = diff_tail_sup(H->right, k, t);
        if (v) best = best ? std::max(*best, *v) : *v;
      }
      if (!is_isolated(H->left->space, s)) {
        if (t == mg) {
          auto v = diff_tail_sup(H->left, k, s);
          if (v) best = best ? std::max(*best, *v) : *v;
        } else {
          Rat v = eval_h(H->right, k + 1, t) - eval_h(H->right, k, t);
          best = best ? std::max(*best, v) : v;
        }
      }
      return best;
    }
    case CandidateTerm::Kind::Restrict:
      return diff_tail_sup(H->inner, k, x);
    case CandidateTerm::Kind::EmbedZero:
      if (H->slot != 0 && x.kind() == PointPath::Kind::InFamily && x.index() == H->slot)
        return diff_tail_sup(H->inner, k, x.inner());
      return Rat(0);
  }
  throw DomainError("bad candidate term");
}

}  // namespace

PointFn diff_fn(const TermPtr& H, long k) {
  return PointFn{H->bound,
                 [H, k](const PointPath& x) { return eval_h(H, k + 1, x) - eval_h(H, k, x); },
                 [H, k](const PointPath& x) -> std::optional<Rat> {
                   if (is_isolated(H->space, x)) return std::nullopt;
                   return diff_tail_sup(H, k, x);
                 }};
}

PointFn sum_fn(const PointFn& f, const PointFn& g) {
  // tail sup of a sum is not the sum of tail sups in general; this handle is
  // for envelope subadditivity probes, so the declared tail is the safe bound
  // sup(f)+sup(g) and callers treat it as an upper envelope input.
  return PointFn{f.bound + g.bound,
                 [f, g](const PointPath& x) { return f.eval(x) + g.eval(x); },
                 [f, g](const PointPath& x) -> std::optional<Rat> {
                   auto a = f.tail_sup(x);
                   auto b = g.tail_sup(x);
                   if (!a && !b) return std::nullopt;
                   Rat va = a ? *a : Rat(0), vb = b ? *b : Rat(0);
                   return va + vb;
                 }};
}

Rat usc_envelope_at(const PointFn& f, const SpacePtr& E, const PointPath& x) {
  if (!is_member(E, x)) throw DomainError("envelope: not a member");
  Rat own = f.eval(x);
  auto ts = f.tail_sup(x);
  return ts ? std::max(own, *ts) : own;
}

// ---------------------------------------------------------------------------
// witness sets

namespace {

PointPath iso_point(const SpacePtr& E) {
  switch (E->kind) {
    case SpaceTerm::Kind::Omega:
      return E->alpha.is_zero() ? PointPath::ord(Ordinal()) : PointPath::ord(Ordinal::from_int(1));
    case SpaceTerm::Kind::Union:
      return PointPath::in_family(E->start, iso_point(E->stream.member(E->start)));
    case SpaceTerm::Kind::Product:
      return PointPath::pair(iso_point(E->left), iso_point(E->right));
    case SpaceTerm::Kind::Restrict:
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment) return PointPath::ord(Ordinal());
      return PointPath::in_family(*E->sel.indices.begin(),
                                  iso_point(E->parent->stream.member(*E->sel.indices.begin())));
  }
  throw DomainError("bad space term");
}

void witnesses_of_space(const SpacePtr& E, long per_stratum, std::vector<PointPath>& out) {
  switch (E->kind) {
    case SpaceTerm::Kind::Omega: {
      out.push_back(marked_point(E));
      out.push_back(PointPath::ord(Ordinal()));
      if (!E->alpha.is_zero()) {
        out.push_back(PointPath::ord(Ordinal::from_int(2)));
        // one representative per rank stratum below alpha (finite strata only)
        if (E->alpha.is_finite()) {
          Ordinal a = E->alpha;
          for (Int r = 1; r < a.as_int(); ++r)
            out.push_back(PointPath::ord(omega_pow(Ordinal::from_int(r))));
        } else {
          out.push_back(PointPath::ord(Ordinal::omega()));
        }
      }
      break;
    }
    case SpaceTerm::Kind::Union: {
      out.push_back(PointPath::infinity());
      for (long i = E->start; i < E->start + per_stratum; ++i) {
        std::vector<PointPath> inner;
        witnesses_of_space(E->stream.member(i), per_stratum, inner);
        for (auto& p : inner) out.push_back(PointPath::in_family(i, std::move(p)));
      }
      break;
    }
    case SpaceTerm::Kind::Product: {
      std::vector<PointPath> ls, rs;
      witnesses_of_space(E->left, per_stratum, ls);
      witnesses_of_space(E->right, per_stratum, rs);
      for (const auto& l : ls)
        for (const auto& r : rs) out.push_back(PointPath::pair(l, r));
      break;
    }
    case SpaceTerm::Kind::Restrict: {
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment) {
        out.push_back(PointPath::ord(E->sel.upto));
        out.push_back(PointPath::ord(Ordinal()));
        if (is_limit(E->sel.upto))
          out.push_back(PointPath::ord(fundamental_seq(E->sel.upto, 2)));
      } else {
        for (long i : E->sel.indices) {
          std::vector<PointPath> inner;
          witnesses_of_space(E->parent->stream.member(i), per_stratum, inner);
          for (auto& p : inner) out.push_back(PointPath::in_family(i, std::move(p)));
        }
      }
      break;
    }
  }
}

}  // namespace

std::vector<PointPath> witness_set(const TermPtr& H, long per_stratum) {
  std::vector<PointPath> out;
  witnesses_of_space(H->space, per_stratum, out);
  // dedupe
  std::vector<PointPath> uniq;
  for (auto& p : out) {
    bool seen = false;
    for (const auto& q : uniq)
      if (q == p) {
        seen = true;
        break;
      }
    if (!seen) uniq.push_back(std::move(p));
  }
  return uniq;
}

// ---------------------------------------------------------------------------
// uniform domination and property (P)

DominanceReport uniform_dominates(const TermPtr& H, const TermPtr& F,
                                  const std::vector<Rat>& eps_grid, long k_bound) {
  if (canonical_class(H->space) != canonical_class(F->space))
    throw DomainError("uniform_dominates: mismatched underlying spaces");
  std::vector<PointPath> W = witness_set(F, 2);
  for (const Rat& eps : eps_grid) {
    for (const auto& x : W) {
      KValue fv = eval_h_kv(F, x);
      KValue hv = eval_h_kv(H, x);
      // monotone in k, so f_k <= f_tail; domination needs some h_l + eps above it
      if (fv.tail() > hv.tail() + eps) {
        long kw = fv.steps().back().first;
        if (kw > k_bound) kw = k_bound;
        return DominanceReport{Dominance::No,
                               "f_k(" + x.format() + ") = " + format_rat(fv.tail()) +
                                   " exceeds every h_l + " + format_rat(eps),
                               x, eps, kw};
      }
    }
  }
  // certificate: pointwise tails dominate on the structurally complete witness
  // set, and every witness KValue stabilizes within k_bound
  for (const auto& x : W) {
    if (eval_h_kv(F, x).steps().back().first > k_bound)
      return DominanceReport{Dominance::Unknown,
                             "witness " + x.format() + " stabilizes beyond the k bound",
                             x, Rat(0), k_bound};
  }
  return DominanceReport{Dominance::Yes, "tail certificate over the witness set",
                         std::nullopt, Rat(0), 0};
}

namespace {

PointPath approach_point(const SpacePtr& E, const PointPath& x, long i) {
  switch (E->kind) {
    case SpaceTerm::Kind::Omega: {
      Ordinal lo = fundamental_seq(x.beta(), Int(i));
      return PointPath::ord(add(lo, Ordinal::from_int(1)));  // successor: isolated
    }
    case SpaceTerm::Kind::Union:
      if (x.kind() == PointPath::Kind::AtInfinity)
        return PointPath::in_family(E->start + i, iso_point(E->stream.member(E->start + i)));
      return PointPath::in_family(x.index(),
                                  approach_point(E->stream.member(x.index()), x.inner(), i));
    case SpaceTerm::Kind::Product: {
      bool liso = is_isolated(E->left, x.left());
      bool riso = is_isolated(E->right, x.right());
      PointPath l = liso ? x.left() : approach_point(E->left, x.left(), i);
      PointPath r = riso ? x.right() : approach_point(E->right, x.right(), i);
      return PointPath::pair(std::move(l), std::move(r));
    }
    case SpaceTerm::Kind::Restrict:
      if (E->sel.kind == ClopenSelector::Kind::InitialSegment) {
        Ordinal lo = fundamental_seq(x.beta(), Int(i));
        return PointPath::ord(add(lo, Ordinal::from_int(1)));
      }
      return PointPath::in_family(x.index(),
                                  approach_point(E->parent->stream.member(x.index()), x.inner(), i));
  }
  throw DomainError("bad space term");
}

bool p_preserving_shape(const TermPtr& H) {
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      return true;
    case CandidateTerm::Kind::RenormPower:
      return p_preserving_shape(H->inner);
    case CandidateTerm::Kind::Product:
      return p_preserving_shape(H->left) && p_preserving_shape(H->right);
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay:
      return true;  // union members are validated with vanishing norms
    case CandidateTerm::Kind::Restrict:
    case CandidateTerm::Kind::EmbedZero:
      return H->inner ? p_preserving_shape(H->inner) : true;
  }
  return false;
}

}  // namespace

bool has_property_P(const TermPtr& H, const PointPath& t, long k, long probe_depth) {
  if (is_isolated(H->space, t)) throw DomainError("property (P) probe requires a non-isolated point");
  if (!p_preserving_shape(H))
    throw HypothesisViolation("property (P)",
                              "term is not built from the (P)-preserving constructors");
  std::vector<Rat> vals;
  for (long i = 0; i <= probe_depth; ++i)
    vals.push_back(eval_tau(H, k, approach_point(H->space, t, i)));
  // converged iff the tail of the probe window is constant
  if (vals.size() < 2) return false;
  Rat last = vals.back();
  long stable = 0;
  for (auto it = vals.rbegin(); it != vals.rend() && *it == last; ++it) ++stable;
  return stable >= 2;
}

// ---------------------------------------------------------------------------
// JSON dump and CLI literals

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json term_json(const TermPtr& H) {
  ordered_json j;
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      j["node"] = "base";
      j["a"] = format_rat(H->a);
      break;
    case CandidateTerm::Kind::RenormPower:
      j["node"] = "pow";
      j["p"] = H->power;
      j["inner"] = term_json(H->inner);
      break;
    case CandidateTerm::Kind::Product:
      j["node"] = "prod";
      j["left"] = term_json(H->left);
      j["right"] = term_json(H->right);
      break;
    case CandidateTerm::Kind::Union: {
      j["node"] = "union";
      j["from"] = H->start;
      switch (H->stream.kind) {
        case UnionStream::Kind::FiniteThenConstant:
          j["stream"] = "finite-then-constant";
          j["tail"] = term_json(H->stream.tail);
          break;
        case UnionStream::Kind::ScaledCopies:
          j["stream"] = "scaled-copies";
          j["base"] = term_json(H->stream.base);
          break;
        case UnionStream::Kind::PowerTower:
          j["stream"] = "power-tower";
          j["base"] = term_json(H->stream.base);
          j["stage"] = format_ordinal(H->stream.base_stage);
          break;
        case UnionStream::Kind::Realized:
          j["stream"] = "realized";
          j["scale_sup"] = format_ordinal(H->stream.scale_sup);
          break;
      }
      j["norm_profile_limit"] =
          H->stream.kind == UnionStream::Kind::FiniteThenConstant
              ? format_rat(H->stream.tail ? H->stream.tail->bound : Rat(0))
              : format_rat(H->stream.norm_h.limit());
      break;
    }
    case CandidateTerm::Kind::MarkedDelay:
      j["node"] = "delay";
      j["c"] = format_rat(H->delay);
      j["inner"] = term_json(H->inner);
      break;
    case CandidateTerm::Kind::Restrict:
      j["node"] = "restrict";
      j["inner"] = term_json(H->inner);
      break;
    case CandidateTerm::Kind::EmbedZero:
      j["node"] = H->slot == 0 ? "zero" : "embed";
      if (H->inner) j["inner"] = term_json(H->inner);
      j["host"] = format_space(H->host);
      break;
  }
  j["bound"] = format_rat(H->bound);
  j["uscd"] = H->uscd;
  return j;
}

}  // namespace

std::string term_to_json(const TermPtr& H) { return term_json(H).dump(); }

namespace {

struct CandParser {
  const std::string& s;
  std::size_t pos = 0;
  explicit CandParser(const std::string& t) : s(t) {}

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

  TermPtr parse();
};

// tiny rational-function literals in n: "p", "p/q", "p/n", "p*n/(n+q)", "n/(n+1)"
RationalSeq parse_ratseq(const std::string& text) {
  auto parse_poly = [](const std::string& t) -> Poly {
    // sums of c, n, c*n
    Poly acc = Poly::constant(0);
    std::size_t i = 0;
    while (i < t.size()) {
      std::size_t j = i;
      while (j < t.size() && t[j] != '+') ++j;
      std::string piece = t.substr(i, j - i);
      Int coeff = 1;
      bool has_n = false;
      auto star = piece.find('*');
      if (star != std::string::npos) {
        coeff = Int(piece.substr(0, star));
        has_n = piece.substr(star + 1) == "n";
      } else if (piece == "n") {
        has_n = true;
      } else {
        coeff = Int(piece);
      }
      Poly term = has_n ? Poly{{Int(0), coeff}} : Poly::constant(coeff);
      acc = acc + term;
      i = j + 1;
      if (j >= t.size()) break;
    }
    return acc;
  };
  auto strip = [](std::string t) {
    std::string out;
    for (char c : t)
      if (c != ' ') out.push_back(c);
    return out;
  };
  std::string t = strip(text);
  auto slash = t.find('/');
  if (slash == std::string::npos) return RationalSeq(parse_poly(t), Poly::constant(1));
  std::string num = t.substr(0, slash), den = t.substr(slash + 1);
  if (!den.empty() && den.front() == '(' && den.back() == ')') den = den.substr(1, den.size() - 2);
  if (!num.empty() && num.front() == '(' && num.back() == ')') num = num.substr(1, num.size() - 2);
  return RationalSeq(parse_poly(num), parse_poly(den));
}

TermPtr CandParser::parse() {
  skip_ws();
  if (eat_word("base")) {
    if (!eat('(')) throw ParseError("expected '(' after base", pos);
    std::string a = arg();
    if (!eat(')')) throw ParseError("expected ')'", pos);
    return base_step(parse_rat(a));
  }
  if (eat_word("prod")) {
    if (!eat('(')) throw ParseError("expected '('", pos);
    TermPtr l = parse();
    if (!eat(',')) throw ParseError("expected ','", pos);
    TermPtr r = parse();
    if (!eat(')')) throw ParseError("expected ')'", pos);
    return product(std::move(l), std::move(r));
  }
  if (eat_word("pow")) {
    if (!eat('(')) throw ParseError("expected '('", pos);
    TermPtr f = parse();
    if (!eat(',')) throw ParseError("expected ','", pos);
    long p = std::stol(arg());
    if (!eat(')')) throw ParseError("expected ')'", pos);
    return renorm_power(std::move(f), p);
  }
  if (eat_word("delay")) {
    if (!eat('(')) throw ParseError("expected '('", pos);
    TermPtr u = parse();
    if (!eat(',')) throw ParseError("expected ','", pos);
    Rat c = parse_rat(arg());
    if (!eat(')')) throw ParseError("expected ')'", pos);
    return marked_delay(std::move(u), c);
  }
  if (eat_word("zero")) {
    if (!eat('(')) throw ParseError("expected '('", pos);
    SpacePtr E = parse_space(arg());
    if (!eat(')')) throw ParseError("expected ')'", pos);
    return embed_zero(nullptr, std::move(E));
  }
  if (eat_word("union")) {
    // union(base(<ratseq in n>), from=N): scaled copies of a unit base step
    if (!eat('(')) throw ParseError("expected '('", pos);
    if (!eat_word("base")) throw ParseError("union template must be base(<seq>)", pos);
    if (!eat('(')) throw ParseError("expected '('", pos);
    std::string seq = arg();
    if (!eat(')')) throw ParseError("expected ')'", pos);
    long from = 1;
    if (eat(',')) {
      if (!eat_word("from=")) throw ParseError("expected from=N", pos);
      from = std::stol(arg());
    }
    if (!eat(')')) throw ParseError("expected ')'", pos);
    UnionStream st;
    st.kind = UnionStream::Kind::ScaledCopies;
    st.base = base_step(Rat(1));
    st.scale = parse_ratseq(seq);
    st.norm_h = st.scale;
    st.scale_sup = Ordinal::from_int(1);
    return union_candidate(std::move(st), from);
  }
  throw ParseError("unrecognized candidate literal", pos);
}

}  // namespace

TermPtr parse_candidate(const std::string& text) {
  CandParser p(text);
  TermPtr out = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input in candidate literal", p.pos);
  return out;
}

std::string format_candidate(const TermPtr& H) {
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      return "base(" + format_rat(H->a) + ")";
    case CandidateTerm::Kind::RenormPower:
      return "pow(" + format_candidate(H->inner) + "," + std::to_string(H->power) + ")";
    case CandidateTerm::Kind::Product:
      return "prod(" + format_candidate(H->left) + "," + format_candidate(H->right) + ")";
    case CandidateTerm::Kind::Union:
      return "union(<stream>, from=" + std::to_string(H->start) + ")";
    case CandidateTerm::Kind::MarkedDelay:
      return "delay(" + format_candidate(H->inner) + "," + format_rat(H->delay) + ")";
    case CandidateTerm::Kind::Restrict:
      return "restrict(" + format_candidate(H->inner) + ")";
    case CandidateTerm::Kind::EmbedZero:
      return H->slot == 0 ? "zero(" + format_space(H->host) + ")"
                          : "embed(" + format_candidate(H->inner) + " into " +
                                format_space(H->host) + ")";
  }
  return "?";
}

}  // namespace tel

#include "tel/transfinite.hpp"

#include <cstdlib>
#include <sstream>

namespace tel {

Budget Budget::fast() { return Budget{256, 800000, 48, 30000}; }
Budget Budget::full() { return Budget{512, 4000000, 96, 120000}; }

Budget Budget::from_env() {
  const char* p = std::getenv("TEL_BUDGET_PROFILE");
  if (p && std::string(p) == "fast") return fast();
  return full();
}

// The ambient context of a slice evaluation. Evaluating a product at a point
// whose right coordinate is the right factor's basepoint reduces to evaluating
// the left factor under a pump: the ambient directions contribute their own
// region suprema at every stage, on top of which the local term accumulates.
struct Engine::Ctx {
  std::string key;
  TermPtr g;                       // ambient right factor
  CtxPtr outer;                    // the context g itself is evaluated under
  PointPath g_marked;              // basepoint of g's space
  Ordinal rank_offset;             // natural sum of ambient basepoint ranks
  std::vector<Ordinal> stages;     // combined ambient stage set
};

namespace {

std::string ord_key(const Ordinal& g) { return format_ordinal(g); }

std::string ctx_key(const Engine::CtxPtr& c) { return c ? c->key : ""; }

std::string term_key(const TermPtr& H) {
  std::ostringstream os;
  os << H.get();
  return os.str();
}

std::vector<Ordinal> sorted_unique(std::vector<Ordinal> v) {
  std::sort(v.begin(), v.end(), [](const Ordinal& a, const Ordinal& b) { return a < b; });
  v.erase(std::unique(v.begin(), v.end(), [](const Ordinal& a, const Ordinal& b) { return a == b; }),
          v.end());
  return v;
}

std::vector<Ordinal> stage_sums(const std::vector<Ordinal>& first,
                                const std::vector<Ordinal>& then) {
  std::vector<Ordinal> out;
  out.push_back(Ordinal());
  for (const auto& a : first) out.push_back(a);
  std::size_t base = out.size();
  for (std::size_t i = 0; i < base; ++i)
    for (const auto& b : then) out.push_back(add(out[i], b));
  out.erase(out.begin());  // drop 0
  return sorted_unique(std::move(out));
}

// Stage set of a term across all its points (finite; used for infinity-point
// staircases and norm stabilization).
std::vector<Ordinal> term_stage_set(const TermPtr& H) {
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      return {Ordinal::from_int(1)};
    case CandidateTerm::Kind::RenormPower:
      return term_stage_set(H->expansion);
    case CandidateTerm::Kind::Product:
      // the right factor fires first; left stages ride on top of its plateaus
      return stage_sums(term_stage_set(H->right), term_stage_set(H->left));
    case CandidateTerm::Kind::Restrict:
      return term_stage_set(H->inner);
    case CandidateTerm::Kind::EmbedZero:
      return H->slot == 0 ? std::vector<Ordinal>{} : term_stage_set(H->inner);
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay: {
      const CandidateTerm& u = H->kind == CandidateTerm::Kind::MarkedDelay ? *H->inner : *H;
      std::vector<Ordinal> out{Ordinal::from_int(1)};
      switch (u.stream.kind) {
        case UnionStream::Kind::FiniteThenConstant:
          for (const auto& m : u.stream.prefix)
            for (auto& s : term_stage_set(m)) out.push_back(s);
          if (u.stream.tail)
            for (auto& s : term_stage_set(u.stream.tail)) out.push_back(s);
          break;
        case UnionStream::Kind::ScaledCopies:
          for (auto& s : term_stage_set(u.stream.base)) out.push_back(s);
          break;
        case UnionStream::Kind::PowerTower:
        case UnionStream::Kind::Realized:
          out.push_back(u.stream.scale_sup);
          out.push_back(add(u.stream.scale_sup, Ordinal::from_int(1)));
          break;
      }
      if (H->kind == CandidateTerm::Kind::MarkedDelay) {
        out.push_back(u.stream.scale_sup);
        out.push_back(add(u.stream.scale_sup, Ordinal::from_int(1)));
      }
      return sorted_unique(std::move(out));
    }
  }
  return {};
}

}  // namespace

Engine::Engine(Budget b) : budget_(b) {
  deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_.timeout_ms);
}

TermPtr Engine::member_of(const TermPtr& U, long n) {
  auto key = std::make_pair(static_cast<const void*>(U.get()), n);
  auto it = members_.find(key);
  if (it != members_.end()) return it->second;
  TermPtr m = stream_member(*U, n);
  pin(m);
  members_.emplace(key, m);
  return m;
}

void Engine::tick() {
  if (++steps_ > budget_.max_steps)
    throw BudgetExceeded("evaluation step budget exhausted (" +
                         std::to_string(budget_.max_steps) + " steps)");
  if ((steps_ & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline_)
    throw BudgetExceeded("evaluation timeout");
}

namespace {
struct DepthGuard {
  long& d;
  long lim;
  DepthGuard(long& depth, long limit) : d(depth), lim(limit) {
    if (++d > lim) throw BudgetExceeded("recursion depth budget exhausted");
  }
  ~DepthGuard() { --d; }
};
}  // namespace

std::vector<Ordinal> Engine::point_stages(const TermPtr& H, const PointPath& x,
                                          const CtxPtr& ctx) {
  std::vector<Ordinal> local;
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      local = {Ordinal::from_int(1)};
      break;
    case CandidateTerm::Kind::RenormPower:
      return point_stages(H->expansion, x, ctx);
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay: {
      if (x.kind() == PointPath::Kind::AtInfinity) {
        local = term_stage_set(H);
      } else {
        TermPtr m = member_of(H, x.index());
        return point_stages(m, x.inner(),
                            ctx);  // clopen member: same ambient context
      }
      break;
    }
    case CandidateTerm::Kind::Product: {
      const PointPath& s = x.left();
      const PointPath& t = x.right();
      if (!(t == marked_point(H->right->space))) return point_stages(H->right, t, ctx);
      std::vector<Ordinal> gs = point_stages(H->right, t, ctx);
      std::vector<Ordinal> fs;
      {
        // plain structural stages of the left factor at s (its own ctx applies
        // through the pump, already folded into ctx->stages below)
        fs = point_stages(H->left, s, nullptr);
      }
      local = stage_sums(gs, fs);
      break;
    }
    case CandidateTerm::Kind::Restrict:
      return point_stages(H->inner, x, ctx);
    case CandidateTerm::Kind::EmbedZero:
      if (H->slot != 0 && x.kind() == PointPath::Kind::InFamily && x.index() == H->slot)
        return point_stages(H->inner, x.inner(), ctx);
      local = {};
      break;
  }
  if (ctx) local = stage_sums(ctx->stages, local);
  return sorted_unique(std::move(local));
}

namespace {

// gamma = stage*j + r with r < stage, for irreducible stage w^beta and
// gamma < stage*omega; returns (j, r).
std::pair<long, Ordinal> stage_decompose(const Ordinal& gamma, const Ordinal& stage) {
  if (gamma < stage) return {0, gamma};
  // stage = w^beta; count the leading coefficient of gamma at exponent beta
  const Ordinal& beta = stage.leading_exp();
  if (gamma.leading_exp() != beta)
    throw DomainError("stage decomposition out of range");
  Int coeff = gamma.terms()[0].coeff;
  if (coeff > 1000000) throw BudgetExceeded("stage coefficient too large");
  long j = static_cast<long>(coeff);
  Ordinal r = left_subtract(nat_mul(stage, Int(j)), gamma);
  return {j, r};
}

}  // namespace

Rat Engine::u_eval_ctx(const TermPtr& H, const Ordinal& gamma, const PointPath& x,
                       const CtxPtr& ctx) {
  tick();
  if (gamma.is_zero()) return Rat(0);
  // pointwise rank cap: u_gamma(x) stabilizes by the rank bound of the full
  // point (local rank plus the ambient basepoint ranks)
  Ordinal r = rank(H->space, x);
  if (ctx) r = natural_sum(r, ctx->rank_offset);
  Ordinal bound = r.is_finite() ? r : add(r, Ordinal::from_int(1));
  const Ordinal& g = gamma <= bound ? gamma : bound;
  if (g.is_zero()) return Rat(0);

  pin(H);
  std::string key = "u|" + term_key(H) + "|" + ord_key(g) + "|" + x.format() + "|" + ctx_key(ctx);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  DepthGuard guard(depth_, budget_.max_depth);

  Rat out;
  if (is_successor(g)) {
    Ordinal d = pred(g);
    Rat own = u_eval_ctx(H, d, x, ctx);
    KValue ts = tail_sup_kv(H, d, x, ctx);
    out = std::max(own, ts.tail());
  } else {
    Rat own = u_sup_below(H, g, x, ctx);
    Rat ts = tail_sup_below(H, g, x, ctx);
    out = std::max(own, ts);
  }
  memo_.emplace(std::move(key), out);
  return out;
}

Rat Engine::u_sup_below(const TermPtr& H, const Ordinal& lambda, const PointPath& x,
                        const CtxPtr& ctx) {
  // sup_{beta < lambda} u_beta(x): the staircase below lambda jumps only at the
  // point's stage set, so the value at the largest stage below lambda is the sup
  Ordinal best;  // 0
  for (const auto& s : point_stages(H, x, ctx))
    if (s < lambda && s > best) best = s;
  return u_eval_ctx(H, best, x, ctx);
}

KValue Engine::tail_sup_kv(const TermPtr& H, const Ordinal& delta, const PointPath& x,
                           const CtxPtr& ctx) {
  tick();
  pin(H);
  std::string key =
      "t|" + term_key(H) + "|" + ord_key(delta) + "|" + x.format() + "|" + ctx_key(ctx);
  auto it = memo_kv_.find(key);
  if (it != memo_kv_.end()) return it->second;
  DepthGuard guard(depth_, budget_.max_depth);

  std::optional<KValue> acc;
  auto join = [&acc](const KValue& v) { acc = acc ? kmax(*acc, v) : v; };

  // ambient regions contribute at every point of the slice
  if (ctx) join(tail_sup_kv(ctx->g, delta, ctx->g_marked, ctx->outer));

  if (!is_isolated(H->space, x)) {
    switch (H->kind) {
      case CandidateTerm::Kind::BaseStep: {
        // late integer tails: the local u-part is point-independent (isolated
        // points only see the ambient floor), tau contributes its full height
        Rat floor = ctx ? u_eval_ctx(H, delta, PointPath::ord(Ordinal::from_int(1)), ctx) : Rat(0);
        join(KValue::constant(floor + H->a));
        break;
      }
      case CandidateTerm::Kind::RenormPower:
        join(tail_sup_kv(H->expansion, delta, x, ctx));
        break;
      case CandidateTerm::Kind::Union:
      case CandidateTerm::Kind::MarkedDelay: {
        if (x.kind() == PointPath::Kind::AtInfinity) {
          join(KValue::constant(members_bundle(H, delta, 0, false, ctx).limsup()));
        } else {
          join(tail_sup_kv(member_of(H, x.index()), delta, x.inner(), ctx));
        }
        break;
      }
      case CandidateTerm::Kind::Product: {
        const PointPath& s = x.left();
        const PointPath& t = x.right();
        PointPath mg = marked_point(H->right->space);
        if (!is_isolated(H->right->space, t)) {
          join(tail_sup_kv(H->right, delta, t, ctx));
        }
        if (!is_isolated(H->left->space, s)) {
          if (t == mg) {
            CtxPtr slice = make_slice_ctx(H->right, ctx);
            join(tail_sup_kv(H->left, delta, s, slice));
          } else {
            // constant along the left direction
            Rat uval = u_eval_ctx(H->right, delta, t, ctx);
            join(eval_tau_kv(H->right, t).shifted(uval));
          }
        }
        break;
      }
      case CandidateTerm::Kind::Restrict:
        // clopen restriction: the tails of interior points are unchanged
        join(tail_sup_kv(H->inner, delta, x, ctx));
        break;
      case CandidateTerm::Kind::EmbedZero: {
        if (H->slot != 0 && x.kind() == PointPath::Kind::InFamily && x.index() == H->slot) {
          join(tail_sup_kv(H->inner, delta, x.inner(), ctx));
        } else if (x.kind() == PointPath::Kind::AtInfinity) {
          // the image sits at one slot; late tails only see fillers where the
          // candidate vanishes (the ambient floor still applies)
          Rat floor = ctx ? u_eval_ctx(ctx->g, delta, ctx->g_marked, ctx->outer) : Rat(0);
          join(KValue::constant(floor));
        } else {
          Rat floor = ctx ? u_eval_ctx(ctx->g, delta, ctx->g_marked, ctx->outer) : Rat(0);
          join(KValue::constant(floor));
        }
        break;
      }
    }
  }

  if (!acc) acc = KValue::constant(Rat(0));  // isolated root point: empty region
  memo_kv_.emplace(std::move(key), *acc);
  return *acc;
}

Rat Engine::tail_sup_below(const TermPtr& H, const Ordinal& lambda, const PointPath& x,
                           const CtxPtr& ctx) {
  tick();
  DepthGuard guard(depth_, budget_.max_depth);
  std::optional<Rat> acc;
  auto join = [&acc](const Rat& v) { acc = acc ? std::max(*acc, v) : v; };

  if (ctx) join(tail_sup_below(ctx->g, lambda, ctx->g_marked, ctx->outer));

  if (!is_isolated(H->space, x)) {
    switch (H->kind) {
      case CandidateTerm::Kind::BaseStep: {
        Rat floor = ctx ? u_sup_below(H, lambda, PointPath::ord(Ordinal::from_int(1)), ctx)
                        : Rat(0);
        join(floor);
        break;
      }
      case CandidateTerm::Kind::RenormPower:
        join(tail_sup_below(H->expansion, lambda, x, ctx));
        break;
      case CandidateTerm::Kind::Union:
      case CandidateTerm::Kind::MarkedDelay: {
        if (x.kind() == PointPath::Kind::AtInfinity) {
          join(members_bundle(H, lambda, -1, true, ctx).limsup());
        } else {
          join(tail_sup_below(member_of(H, x.index()), lambda, x.inner(), ctx));
        }
        break;
      }
      case CandidateTerm::Kind::Product: {
        const PointPath& s = x.left();
        const PointPath& t = x.right();
        PointPath mg = marked_point(H->right->space);
        if (!is_isolated(H->right->space, t)) join(tail_sup_below(H->right, lambda, t, ctx));
        if (!is_isolated(H->left->space, s)) {
          if (t == mg) {
            CtxPtr slice = make_slice_ctx(H->right, ctx);
            join(tail_sup_below(H->left, lambda, s, slice));
          } else {
            join(u_sup_below(H->right, lambda, t, ctx));
          }
        }
        break;
      }
      case CandidateTerm::Kind::Restrict:
        join(tail_sup_below(H->inner, lambda, x, ctx));
        break;
      case CandidateTerm::Kind::EmbedZero: {
        if (H->slot != 0 && x.kind() == PointPath::Kind::InFamily && x.index() == H->slot) {
          join(tail_sup_below(H->inner, lambda, x.inner(), ctx));
        } else {
          Rat floor = ctx ? u_sup_below(ctx->g, lambda, ctx->g_marked, ctx->outer) : Rat(0);
          join(floor);
        }
        break;
      }
    }
  }
  return acc ? *acc : Rat(0);
}

// Member-norm bundles for union tails. `below` selects the limit-stage variant
// sup_{beta<lambda} (no tau); otherwise entries are ||u_gamma + tau_k|| with
// k = -1 meaning tau = 0 and k >= 0 meaning tau present with its thresholds in
// the late-member regime.
SeqBundle Engine::members_bundle(const TermPtr& U, const Ordinal& gamma, long k, bool below,
                                 const CtxPtr& ctx) {
  const bool delayed = U->kind == CandidateTerm::Kind::MarkedDelay;
  const CandidateTerm& u = delayed ? *U->inner : *U;
  const UnionStream& st = u.stream;
  long start = u.start;

  if (ctx) {
    // Ambient floors interleave with member accrual. Exact when each ambient
    // jump dominates everything the union can accumulate below it (the stage
    // condition the product constructions validate); otherwise refuse.
    std::vector<std::pair<Ordinal, Rat>> stair;
    stair.emplace_back(Ordinal(), Rat(0));
    for (const auto& s : ctx->stages)
      if (s <= gamma) stair.emplace_back(s, u_eval_ctx(ctx->g, s, ctx->g_marked, ctx->outer));
    Rat prev = 0;
    for (std::size_t i = 1; i < stair.size(); ++i) {
      if (stair[i].second > prev && stair[i].second < prev + U->bound)
        throw BudgetExceeded("union under a non-dominating ambient floor");
      prev = std::max(prev, stair[i].second);
    }
    SeqBundle out;
    out.tail_from = start;
    for (const auto& [sigma, f] : stair) {
      Ordinal rest = left_subtract(sigma, gamma);
      SeqBundle part = members_bundle(U, rest, k, below, nullptr);
      for (auto& [n, v] : part.exceptions) out.exceptions.emplace_back(n, v + f);
      for (auto& b : part.branches) out.branches.push_back(b.plus_const(f));
      out.tail_from = std::max(out.tail_from, part.tail_from);
    }
    return out;
  }

  SeqBundle out;
  out.tail_from = start;
  auto member_value = [&](long n) -> Rat {
    TermPtr m = member_of(delayed ? U->inner : U, n);
    Rat v = below ? nu_below(m, gamma, nullptr) : nu(m, gamma, k, nullptr);
    if (delayed) {
      // the delayed marked point carries u(0_n) plus tau' = c for k <= n
      Rat at_marked = below ? u_sup_below(m, gamma, marked_point(m->space), nullptr)
                            : u_eval_ctx(m, gamma, marked_point(m->space), nullptr);
      Rat extra = (below || k < 0) ? at_marked : at_marked + U->delay;
      v = std::max(v, extra);
    }
    return v;
  };

  switch (st.kind) {
    case UnionStream::Kind::FiniteThenConstant: {
      for (std::size_t i = 0; i < st.prefix.size(); ++i)
        out.exceptions.emplace_back(start + static_cast<long>(i),
                                    member_value(start + static_cast<long>(i)));
      out.tail_from = start + static_cast<long>(st.prefix.size());
      out.branches.push_back(RationalSeq::constant(member_value(out.tail_from)));
      break;
    }
    case UnionStream::Kind::ScaledCopies: {
      Rat unit = below ? nu_below(st.base, gamma, nullptr) : nu(st.base, gamma, k, nullptr);
      out.branches.push_back(st.scale.scaled(unit));
      if (delayed) {
        Rat unit_marked = below
                              ? u_sup_below(st.base, gamma, marked_point(st.base->space), nullptr)
                              : u_eval_ctx(st.base, gamma, marked_point(st.base->space), nullptr);
        RationalSeq extra = st.scale.scaled(unit_marked);
        out.branches.push_back((below || k < 0) ? extra : extra.plus_const(U->delay));
      }
      break;
    }
    case UnionStream::Kind::PowerTower: {
      const Ordinal& sigma = st.base_stage;
      const Ordinal& lambda = st.scale_sup;  // sigma * omega
      if (gamma >= lambda) {
        // saturated members: full chains at norm amp(n)
        out.branches.push_back(st.amp);
        if (delayed) {
          RationalSeq extra = st.amp;
          out.branches.push_back((below || k < 0) ? extra : extra.plus_const(U->delay));
        }
        break;
      }
      auto [j, r] = stage_decompose(gamma, sigma);
      Rat unit_rest;  // base-level contribution above the consumed stages
      if (below && r.is_zero() && j > 0) {
        // sup over beta < sigma*j: consume j-1 full stages plus the base cap
        unit_rest = nu_below(st.base, sigma, nullptr);
        j = j - 1;
      } else if (below) {
        unit_rest = nu_below(st.base, r, nullptr);
      } else {
        unit_rest = nu(st.base, r, k, nullptr);
      }
      // members n <= j are saturated; list them explicitly
      if (j > 64) throw BudgetExceeded("power stream stage index too large");
      for (long n = start; n <= j; ++n) out.exceptions.emplace_back(n, member_value(n));
      out.tail_from = std::max(start, j + 1);
      // members n > j: (amp(n)/n) * (j + unit_rest)
      Rat lvl = Rat(j) + unit_rest;
      RationalSeq level(Poly::constant(numerator(lvl)), Poly{{Int(0), denominator(lvl)}});
      out.branches.push_back(seq_mul(st.amp, level));
      if (delayed) {
        // member marked staircase amp(n) * j / n, plus the delay at successor
        // stages with tau present
        RationalSeq marked_level(Poly{{Int(j)}}, Poly{{Int(0), Int(1)}});
        RationalSeq marked_seq = seq_mul(st.amp, marked_level);
        out.branches.push_back((below || k < 0) ? marked_seq : marked_seq.plus_const(U->delay));
      }
      break;
    }
    case UnionStream::Kind::Realized: {
      long probe = start + 3;
      for (long n = start; n < probe; ++n) out.exceptions.emplace_back(n, member_value(n));
      out.tail_from = probe;
      // no closed tail form: downstream limsup/sup calls will report Unknown
      break;
    }
  }
  return out;
}

Engine::CtxPtr Engine::make_slice_ctx(const TermPtr& G, const CtxPtr& outer) {
  auto c = std::make_shared<Ctx>();
  c->g = G;
  c->outer = outer;
  c->g_marked = marked_point(G->space);
  Ordinal gr = rank(G->space, c->g_marked);
  c->rank_offset = outer ? natural_sum(outer->rank_offset, gr) : gr;
  std::vector<Ordinal> gstages = point_stages(G, c->g_marked, outer);
  c->stages = outer ? stage_sums(outer->stages, gstages) : gstages;
  c->key = ctx_key(outer) + "/P" + term_key(G);
  return c;
}

// ---------------------------------------------------------------------------
// whole-space suprema

Rat Engine::nu(const TermPtr& H, const Ordinal& gamma, long k, const CtxPtr& ctx) {
  tick();
  pin(H);
  std::string key = "n|" + term_key(H) + "|" + ord_key(gamma) + "|" + std::to_string(k) + "|" +
                    ctx_key(ctx);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  DepthGuard guard(depth_, budget_.max_depth);
  // k >= 0 means "tau_k present with free thresholds", k = -1 means tau = 0.
  Rat out;
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep: {
      Rat iso = u_eval_ctx(H, gamma, PointPath::ord(Ordinal::from_int(1)), ctx);
      Rat top = u_eval_ctx(H, gamma, marked_point(H->space), ctx);
      out = std::max(iso + (k >= 0 ? H->a : Rat(0)), top);
      break;
    }
    case CandidateTerm::Kind::RenormPower:
      out = nu(H->expansion, gamma, k, ctx);
      break;
    case CandidateTerm::Kind::Product: {
      // off-slice points carry the right factor, slice points the left factor
      // under the right pump
      Rat off = nu(H->right, gamma, k, ctx);
      CtxPtr slice = make_slice_ctx(H->right, ctx);
      Rat on = nu(H->left, gamma, k, slice);
      out = std::max(off, on);
      break;
    }
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay: {
      const CandidateTerm& u =
          H->kind == CandidateTerm::Kind::MarkedDelay ? *H->inner : *H;
      SeqBundle b = members_bundle(H, gamma, k, false, ctx);
      Rat members = b.sup_after(u.start - 1);
      Rat at_inf = u_eval_ctx(H, gamma, PointPath::infinity(), ctx);
      out = std::max(members, at_inf);
      break;
    }
    case CandidateTerm::Kind::Restrict: {
      if (H->sel.kind == ClopenSelector::Kind::FamilyIndexSet) {
        out = 0;
        for (long i : H->sel.indices) out = std::max(out, nu(member_of(H->inner, i), gamma, k, ctx));
      } else {
        // initial interval of the base-step line: enumerate when finite
        const Ordinal& upto = H->sel.upto;
        if (upto.is_finite()) {
          out = 0;
          long top = static_cast<long>(upto.as_int());
          for (long j = 0; j <= top; ++j) {
            PointPath p = PointPath::ord(Ordinal::from_int(j));
            Rat v = u_eval_ctx(H, gamma, p, ctx);
            if (k >= 0) v += eval_tau(H, k, p);
            out = std::max(out, v);
          }
        } else {
          out = nu(H->inner, gamma, k, ctx);  // free coordinates survive
        }
      }
      break;
    }
    case CandidateTerm::Kind::EmbedZero: {
      if (H->slot == 0) {
        out = ctx ? u_eval_ctx(ctx->g, gamma, ctx->g_marked, ctx->outer) : Rat(0);
      } else {
        Rat on = nu(H->inner, gamma, k, ctx);
        Rat off = ctx ? u_eval_ctx(ctx->g, gamma, ctx->g_marked, ctx->outer) : Rat(0);
        out = std::max(on, off);
      }
      break;
    }
  }
  memo_.emplace(std::move(key), out);
  return out;
}

Rat Engine::nu_below(const TermPtr& H, const Ordinal& lambda, const CtxPtr& ctx) {
  // sup over the space of sup_{beta<lambda} u_beta = sup_{beta<lambda} ||u_beta||;
  // the norm staircase jumps within the term stage set
  Ordinal best;
  for (const auto& s : term_stage_set(H))
    if (s < lambda && s > best) best = s;
  if (ctx)
    for (const auto& s : ctx->stages)
      if (s < lambda && s > best) best = s;
  return nu(H, best, -1, ctx);
}

// ---------------------------------------------------------------------------
// public surface

Rat Engine::u_eval(const TermPtr& H, const Ordinal& gamma, const PointPath& x) {
  if (!is_member(H->space, x)) throw DomainError("u_eval: not a member: " + x.format());
  return u_eval_ctx(H, gamma, x, nullptr);
}

Rat Engine::u_norm(const TermPtr& H, const Ordinal& gamma, long k) {
  return nu(H, gamma, k, nullptr);
}

Ordinal Engine::alpha0_point(const TermPtr& H, const PointPath& x) {
  Ordinal r = rank(H->space, x);
  Ordinal bound = r.is_finite() ? r : add(r, Ordinal::from_int(1));
  std::vector<Ordinal> cands = point_stages(H, x, nullptr);
  std::vector<Ordinal> probes{Ordinal(), Ordinal::from_int(1)};
  for (const auto& s : cands) {
    if (s <= bound) probes.push_back(s);
    Ordinal s1 = add(s, Ordinal::from_int(1));
    if (s1 <= bound) probes.push_back(s1);
  }
  probes = sorted_unique(std::move(probes));
  Rat final_v = u_eval_ctx(H, probes.back(), x, nullptr);
  // stabilization confirmation at the last stage + 1
  Rat confirm = u_eval_ctx(H, add(probes.back(), Ordinal::from_int(1)), x, nullptr);
  if (confirm != final_v)
    throw DomainError("alpha0_point: stage set incomplete at " + x.format());
  for (const auto& s : probes)
    if (u_eval_ctx(H, s, x, nullptr) == final_v) return s;
  return probes.back();
}

Ordinal Engine::alpha0_global(const TermPtr& H) {
  std::vector<PointPath> W = witness_set(H, 2);
  if (static_cast<long>(W.size()) > budget_.max_witnesses)
    W.resize(static_cast<std::size_t>(budget_.max_witnesses));
  Ordinal best;
  for (const auto& x : W) {
    Ordinal a = alpha0_point(H, x);
    if (a > best) best = a;
  }
  return best;
}

bool Engine::check_subadditivity(const TermPtr& H, const Ordinal& alpha, const Ordinal& beta,
                                 const std::vector<PointPath>& witnesses) {
  Ordinal sum = add(alpha, beta);
  for (const auto& x : witnesses) {
    Rat lhs = u_eval(H, sum, x);
    Rat rhs = u_eval(H, alpha, x) + u_eval(H, beta, x);
    if (lhs > rhs) return false;
  }
  return true;
}

bool Engine::check_pointwise_bound(const TermPtr& H, const PointPath& x) {
  Ordinal a0 = alpha0_point(H, x);
  Ordinal r = rank(H->space, x);
  Ordinal cap = r.is_finite() ? r : add(r, Ordinal::from_int(1));
  return a0 <= cap;
}

// ---------------------------------------------------------------------------
// profile lookups and verification

Rat TransfiniteProfile::at_marked_at(const Ordinal& g) const {
  Rat v = 0;
  for (const auto& b : breakpoints)
    if (b.gamma <= g) v = b.at_marked;
  return v;
}

Rat TransfiniteProfile::norm_at(const Ordinal& g) const {
  Rat v = 0;
  for (const auto& b : breakpoints)
    if (b.gamma <= g) v = b.norm;
  return v;
}

PointPath profile_basepoint(const TermPtr& H) {
  if (H->kind == CandidateTerm::Kind::EmbedZero && H->slot != 0)
    return PointPath::in_family(H->slot, profile_basepoint(H->inner));
  return marked_point(H->space);
}

VerifyReport verify_profile(const TermPtr& H, const TransfiniteProfile& P,
                            const std::vector<PointPath>& witnesses, const Budget& budget) {
  VerifyReport rep;
  Engine eng(budget);
  PointPath m = profile_basepoint(H);
  for (const auto& bp : P.breakpoints) {
    // basepoint value
    try {
      Rat got = eng.u_eval(H, bp.gamma, m);
      bool ok = got == bp.at_marked;
      rep.rows.push_back({bp.gamma, m.format(), got, bp.at_marked, ok});
      rep.all_match = rep.all_match && ok;
    } catch (const BudgetExceeded& e) {
      rep.skipped.push_back("u(" + format_ordinal(bp.gamma) + ", marked): " + e.what());
    }
    // norm value
    try {
      Rat got = eng.u_norm(H, bp.gamma);
      bool ok = got == bp.norm;
      rep.rows.push_back({bp.gamma, "<norm>", got, bp.norm, ok});
      rep.all_match = rep.all_match && ok;
    } catch (const BudgetExceeded& e) {
      rep.skipped.push_back("||u_" + format_ordinal(bp.gamma) + "||: " + e.what());
    }
    // witnesses stay within the claimed norm
    for (const auto& x : witnesses) {
      if (x == m) continue;
      try {
        Rat got = eng.u_eval(H, bp.gamma, x);
        bool ok = got <= bp.norm;
        rep.rows.push_back({bp.gamma, x.format(), got, bp.norm, ok});
        rep.all_match = rep.all_match && ok;
      } catch (const BudgetExceeded& e) {
        rep.skipped.push_back("u(" + format_ordinal(bp.gamma) + ", " + x.format() +
                              "): " + e.what());
      }
    }
  }
  // stabilization at alpha0
  try {
    Rat at = eng.u_eval(H, P.alpha0, m);
    Rat next = eng.u_eval(H, add(P.alpha0, Ordinal::from_int(1)), m);
    bool ok = at == next;
    rep.rows.push_back({P.alpha0, m.format() + " (stab)", next, at, ok});
    rep.all_match = rep.all_match && ok;
  } catch (const BudgetExceeded& e) {
    rep.skipped.push_back(std::string("stabilization: ") + e.what());
  }
  return rep;
}

}  // namespace tel

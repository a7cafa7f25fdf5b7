#include <algorithm>

#include "tel/transfinite.hpp"

// Closed-form profiles, assembled bottom-up from the combinators' stage
// algebra: disjoint unions take member-norm limsups at the compactification
// point, powers and products concatenate stage staircases under the weight
// condition, and the marked delay grafts its plateau below the union's limit
// stage. This path never calls the pointwise engine.

namespace tel {

namespace {

struct Stairs {
  // ascending (stage, value); value 0 before the first stage
  std::vector<std::pair<Ordinal, Rat>> steps;

  Rat at(const Ordinal& g) const {
    Rat v = 0;
    for (const auto& [s, val] : steps)
      if (s <= g) v = val;
    return v;
  }
  Ordinal last_stage_at_or_below(const Ordinal& g) const {
    Ordinal out;
    for (const auto& [s, val] : steps)
      if (s <= g) out = s;
    return out;
  }
  void push(const Ordinal& s, const Rat& v) { steps.emplace_back(s, v); }
  void normalize() {
    std::stable_sort(steps.begin(), steps.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Ordinal, Rat>> out;
    Rat cur = 0;
    for (auto& [s, v] : steps) {
      Rat vv = std::max(v, cur);  // staircases are non-decreasing
      if (!out.empty() && out.back().first == s) {
        out.back().second = std::max(out.back().second, vv);
      } else if (vv > cur || (out.empty() && vv > 0)) {
        out.emplace_back(s, vv);
      }
      cur = std::max(cur, vv);
    }
    steps = std::move(out);
  }
};

struct Closed {
  Stairs marked;  // u_gamma at the basepoint
  Stairs norm;    // ||u_gamma||
  Ordinal alpha0;
  Rat bound;
  bool strict_below = true;
  bool norm_exact_between = true;
  std::vector<std::string> notes;
};

Closed closed_profile(const TermPtr& H);

Closed base_closed(const Rat& a) {
  Closed c;
  c.marked.push(Ordinal::from_int(1), a);
  c.norm.push(Ordinal::from_int(1), a);
  c.alpha0 = Ordinal::from_int(1);
  c.bound = a;
  return c;
}

// Product composition: the right factor fires first; its marked staircase acts
// as a floor under the left factor's accrual. Requires each floor jump to
// dominate the left side's total (the weight inequality), which also yields
// strictness of the norms below the final stage.
Closed product_closed(const Closed& pf, const Closed& pg, const std::string& label) {
  // weight condition: every jump of the right marked staircase covers the
  // left total
  Rat prev = 0;
  for (const auto& [s, v] : pg.marked.steps) {
    Rat jump = v - prev;
    if (jump < pf.bound)
      throw HypothesisViolation(
          "product weights (" + label + ")",
          "stage " + format_ordinal(s) + " jump " + format_rat(jump) +
              " is below the left-factor total " + format_rat(pf.bound));
    prev = v;
  }
  Closed c;
  c.strict_below = pf.strict_below && pg.strict_below;
  c.norm_exact_between = pf.norm_exact_between && pg.norm_exact_between;
  for (const auto& n : pf.notes) c.notes.push_back(n);
  for (const auto& n : pg.notes) c.notes.push_back(n);

  std::vector<std::pair<Ordinal, Rat>> floors;
  floors.emplace_back(Ordinal(), Rat(0));
  for (const auto& st : pg.marked.steps) floors.push_back(st);

  // marked staircase: floor value plus the left staircase restarted at each
  // right stage
  for (std::size_t i = 0; i < floors.size(); ++i) {
    const auto& [sg, vg] = floors[i];
    if (i > 0) c.marked.push(sg, vg);
    for (const auto& [sf, vf] : pf.marked.steps) c.marked.push(add(sg, sf), vg + vf);
  }
  c.marked.normalize();

  // norms: off-slice points carry the right norms; slice points carry floor
  // plus left norms
  std::vector<Ordinal> stages;
  for (const auto& [s, v] : pg.norm.steps) stages.push_back(s);
  for (const auto& [sg, vg] : floors) {
    stages.push_back(sg);
    for (const auto& [sf, vf] : pf.norm.steps) stages.push_back(add(sg, sf));
  }
  std::sort(stages.begin(), stages.end(), [](const Ordinal& a, const Ordinal& b) { return a < b; });
  stages.erase(std::unique(stages.begin(), stages.end(),
                           [](const Ordinal& a, const Ordinal& b) { return a == b; }),
               stages.end());
  for (const auto& g : stages) {
    Rat v = pg.norm.at(g);
    for (const auto& [sg, vg] : floors)
      if (sg <= g) v = std::max(v, vg + pf.norm.at(left_subtract(sg, g)));
    c.norm.push(g, v);
  }
  c.norm.normalize();

  Ordinal g_final = floors.back().first;
  Rat v_final = floors.back().second;
  Ordinal stacked = add(g_final, pf.alpha0);
  c.alpha0 = std::max(pg.alpha0, stacked, [](const Ordinal& a, const Ordinal& b) { return a < b; });
  c.bound = std::max(pg.bound, v_final + pf.bound);
  return c;
}

Closed union_closed(const TermPtr& H) {
  const bool delayed = H->kind == CandidateTerm::Kind::MarkedDelay;
  const CandidateTerm& u = delayed ? *H->inner : *H;
  const UnionStream& st = u.stream;
  long start = u.start;
  Closed c;

  switch (st.kind) {
    case UnionStream::Kind::FiniteThenConstant: {
      // finitely many live members (the tail is zero); infinity stays at 0
      std::vector<Closed> ms;
      for (const auto& m : st.prefix) ms.push_back(closed_profile(m));
      for (const auto& m : ms) {
        for (const auto& [s, v] : m.norm.steps) c.norm.push(s, std::max(c.norm.at(s), v));
        if (m.alpha0 > c.alpha0) c.alpha0 = m.alpha0;
        c.bound = std::max(c.bound, m.bound);
        c.strict_below = c.strict_below && m.strict_below;
      }
      // norms across clopen pieces: pointwise max of member norm staircases
      Stairs merged;
      std::vector<Ordinal> stages;
      for (const auto& m : ms)
        for (const auto& [s, v] : m.norm.steps) stages.push_back(s);
      std::sort(stages.begin(), stages.end(),
                [](const Ordinal& a, const Ordinal& b) { return a < b; });
      for (const auto& g : stages) {
        Rat v = 0;
        for (const auto& m : ms) v = std::max(v, m.norm.at(g));
        merged.push(g, v);
      }
      merged.normalize();
      c.norm = merged;
      break;
    }
    case UnionStream::Kind::ScaledCopies: {
      Closed b = closed_profile(st.base);
      Rat ssup = st.scale.sup_after(start - 1);
      for (const auto& [s, v] : b.norm.steps) c.norm.push(s, v * ssup);
      c.alpha0 = b.alpha0;
      c.bound = b.bound * ssup;
      c.strict_below = b.strict_below;
      // basepoint: limsup_n of scaled member norms = 0 (scales tend to 0)
      break;
    }
    case UnionStream::Kind::PowerTower: {
      Closed b = closed_profile(st.base);
      // the base must be a single-jump realizer at its stage
      if (!(b.marked.steps.size() == 1 && b.marked.steps[0].first == st.base_stage))
        throw HypothesisViolation("powers base",
                                  "base marked staircase is not a single jump at its stage");
      const Ordinal& lambda = st.scale_sup;
      Rat a = st.amp.limit();
      // norms at the stages {1, sigma, lambda}: sup over members of the power
      // staircase (amp(n)/n scaled); exact via the sequence machinery
      auto norm_at = [&](const Ordinal& g) -> Rat {
        if (g >= lambda) return a;
        // member n saturates at amp(n) once sigma*n <= g; beyond, the level is
        // amp(n) * (j + base-norm(r)) / n for g = sigma*j + r
        long j = 0;
        Ordinal r = g;
        if (g >= st.base_stage) {
          const Ordinal& beta = st.base_stage.leading_exp();
          if (g.leading_exp() == beta) {
            j = static_cast<long>(g.terms()[0].coeff);
            r = left_subtract(nat_mul(st.base_stage, Int(j)), g);
          }
        }
        Rat best = 0;
        for (long n = start; n <= j; ++n) best = std::max(best, st.amp.eval(n));
        Rat lvl = Rat(j) + b.norm.at(r);
        RationalSeq level(Poly::constant(numerator(lvl)), Poly{{Int(0), denominator(lvl)}});
        RationalSeq branch = seq_mul(st.amp, level);
        return std::max(best, branch.sup_after(std::max(start - 1, j)));
      };
      c.norm.push(Ordinal::from_int(1), norm_at(Ordinal::from_int(1)));
      c.norm.push(st.base_stage, norm_at(st.base_stage));
      c.norm.push(lambda, a);
      c.norm.normalize();
      c.norm_exact_between = false;  // genuine breakpoints at every stage multiple
      c.marked.push(lambda, a);
      c.alpha0 = lambda;
      c.bound = a;
      c.strict_below = true;  // member norms stay at amp(n) < a below lambda
      if (st.base_stage == Ordinal::from_int(1))
        c.notes.push_back("powers lemma applied at stage 1 (finite irreducible case)");
      break;
    }
    case UnionStream::Kind::Realized: {
      const Ordinal& lambda = st.scale_sup;
      Rat a = st.amp.limit();
      bool capped = false;
      auto norm_at = [&](const Ordinal& g) -> Rat {
        // members with guard stage above g are capped by their epsilon budget,
        // so the supremum is reached among finitely many materialized members
        Rat best = 0;
        long n = start;
        for (; n < start + 8; ++n) {
          if (st.member_guard && st.member_guard(n) > g && st.guard_eps.eval(n) <= best) break;
          Closed m = closed_profile(st.make(n));
          best = std::max(best, m.norm.at(g));
        }
        if (n == start + 8) {
          capped = true;  // certified upper bound only
          best = std::max(best, st.guard_eps.eval(n));
        }
        return best;
      };
      c.norm.push(Ordinal::from_int(1), norm_at(Ordinal::from_int(1)));
      c.norm.push(lambda, a);
      c.norm.normalize();
      c.norm_exact_between = false;
      if (capped)
        c.notes.push_back("union norm entries beyond the materialization window are upper bounds");
      c.marked.push(lambda, a);
      c.alpha0 = lambda;
      c.bound = a;
      c.strict_below = true;
      break;
    }
  }

  if (delayed) {
    // the delay grafts a plateau c below the union's limit stage and one extra
    // successor stage on top of it
    const Rat& d = H->delay;
    const Ordinal& lambda = u.stream.scale_sup;
    Rat at_lambda = c.marked.at(lambda);
    if (d > at_lambda)
      throw HypothesisViolation("marked delay",
                                "delay " + format_rat(d) + " exceeds the union's limit value " +
                                    format_rat(at_lambda));
    Ordinal lp1 = add(lambda, Ordinal::from_int(1));
    Stairs m2;
    m2.push(Ordinal::from_int(1), d);
    m2.push(lambda, at_lambda);
    m2.push(lp1, at_lambda + d);
    m2.normalize();
    c.marked = m2;
    Stairs n2;
    for (const auto& [s, v] : c.norm.steps) n2.push(s, std::max(v, d));
    n2.push(Ordinal::from_int(1), d);
    n2.push(lp1, at_lambda + d);
    n2.normalize();
    c.norm = n2;
    c.alpha0 = lp1;
    c.bound = at_lambda + d;
    c.strict_below = true;  // ||u_gamma|| <= at_lambda < bound below lambda+1
  }
  return c;
}

Closed closed_profile(const TermPtr& H) {
  switch (H->kind) {
    case CandidateTerm::Kind::BaseStep:
      return base_closed(H->a);
    case CandidateTerm::Kind::RenormPower: {
      Closed b = closed_profile(H->inner);
      Closed one = b;
      Rat inv = Rat(Int(1), Int(H->power));
      for (auto& [s, v] : one.marked.steps) v = v * inv;
      for (auto& [s, v] : one.norm.steps) v = v * inv;
      one.bound = one.bound * inv;
      // identical factors: associate to the right so every floor increment of
      // the growing chain matches the single-factor total
      Closed acc = one;
      for (long j = 1; j < H->power; ++j) acc = product_closed(one, acc, "powers");
      if (!b.marked.steps.empty() && b.marked.steps[0].first == Ordinal::from_int(1) &&
          H->power > 1)
        acc.notes.push_back("powers lemma applied at stage 1 (finite irreducible case)");
      return acc;
    }
    case CandidateTerm::Kind::Product:
      return product_closed(closed_profile(H->left), closed_profile(H->right), "product");
    case CandidateTerm::Kind::Union:
    case CandidateTerm::Kind::MarkedDelay:
      return union_closed(H);
    case CandidateTerm::Kind::Restrict: {
      if (H->sel.kind == ClopenSelector::Kind::FamilyIndexSet) {
        Closed c;
        c.strict_below = true;
        for (long i : H->sel.indices) {
          Closed m = closed_profile(stream_member(*H->inner, i));
          for (const auto& [s, v] : m.norm.steps) c.norm.push(s, v);
          if (i == *H->sel.indices.rbegin()) c.marked = m.marked;
          if (m.alpha0 > c.alpha0) c.alpha0 = m.alpha0;
          c.bound = std::max(c.bound, m.bound);
          c.strict_below = c.strict_below && m.strict_below;
        }
        c.norm.normalize();
        return c;
      }
      // initial interval of the base line
      Closed c;
      if (is_limit(H->sel.upto)) return closed_profile(H->inner);
      c.alpha0 = Ordinal();  // finitely many isolated points: u is identically 0
      c.bound = 0;
      return c;
    }
    case CandidateTerm::Kind::EmbedZero: {
      if (H->slot == 0) {
        Closed c;
        c.alpha0 = Ordinal();
        c.bound = 0;
        return c;
      }
      Closed c = closed_profile(H->inner);
      c.notes.push_back("profile basepoint is the image of the realization basepoint");
      return c;
    }
  }
  throw DomainError("bad candidate term");
}

}  // namespace

TransfiniteProfile profile_closed_form(const TermPtr& H) {
  Closed c = closed_profile(H);
  TransfiniteProfile p;
  p.alpha0 = c.alpha0;
  p.bound_a = c.bound;
  p.strict_below = c.strict_below;
  p.norm_piecewise_exact = c.norm_exact_between;
  p.notes = c.notes;
  std::vector<Ordinal> stages;
  for (const auto& [s, v] : c.marked.steps) stages.push_back(s);
  for (const auto& [s, v] : c.norm.steps) stages.push_back(s);
  if (!c.alpha0.is_zero()) stages.push_back(c.alpha0);
  std::sort(stages.begin(), stages.end(), [](const Ordinal& a, const Ordinal& b) { return a < b; });
  stages.erase(std::unique(stages.begin(), stages.end(),
                           [](const Ordinal& a, const Ordinal& b) { return a == b; }),
               stages.end());
  for (const auto& g : stages)
    p.breakpoints.push_back({g, c.norm.at(g), c.marked.at(g)});
  return p;
}

}  // namespace tel

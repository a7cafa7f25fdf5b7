#include "tel/realize.hpp"

#include <algorithm>

namespace tel {

std::vector<Rat> select_weights(const Ordinal& alpha, const Rat& a) {
  if (alpha.is_zero()) throw DomainError("select_weights requires alpha > 0");
  if (a <= 0) throw DomainError("select_weights requires a > 0");
  const auto& terms = alpha.terms();
  std::size_t N = terms.size();
  std::vector<Rat> t(N);
  Rat tail = 0;
  for (std::size_t j = N; j-- > 0;) {
    if (j == N - 1) {
      t[j] = 1;
    } else {
      t[j] = (Rat(terms[j].coeff) + 1) * tail;
    }
    tail += t[j];
  }
  Rat total = 0;
  for (const auto& v : t) total += v;
  for (auto& v : t) v = v * a / total;
  // validate strict decrease and the weight inequality
  Rat rest = 0;
  for (std::size_t j = N; j-- > 0;) {
    if (j + 1 < N) {
      if (!(t[j] > t[j + 1]))
        throw HypothesisViolation("weights", "not strictly decreasing");
      if (t[j] / Rat(terms[j].coeff) < rest)
        throw HypothesisViolation("weights", "a_j/m_j >= sum_{i>j} a_i fails at j=" +
                                                 std::to_string(j + 1));
    }
    rest += t[j];
  }
  return t;
}

namespace {

void expect(bool ok, const std::string& what) {
  if (!ok) throw DomainError("realization self-check failed: " + what);
}

RationalSeq amp_seq(const Rat& a) {
  // a * n / (n + 1), strictly increasing to a
  Poly num{{Int(0), numerator(a)}};
  Poly den{{denominator(a), denominator(a)}};
  return RationalSeq(num, den, 1);
}

}  // namespace

Realization realize_irreducible(const Ordinal& alpha, const Rat& a, const Rat& eps,
                                const Ordinal& delta) {
  if (alpha.is_zero() || !is_irreducible(alpha))
    throw DomainError("realize_irreducible requires an irreducible stage");
  if (!(eps > 0 && eps < a))
    throw HypothesisViolation("irreducible realizer", "requires 0 < eps < a");
  if (!delta.is_zero() && !(is_irreducible(delta) && delta < alpha))
    throw HypothesisViolation("irreducible realizer", "delta must be irreducible below alpha");

  TermPtr term;
  if (alpha == Ordinal::from_int(1)) {
    term = base_step(a);
  } else {
    const Ordinal& beta = alpha.leading_exp();  // alpha = w^beta, beta > 0
    if (is_successor(beta)) {
      // union over n >= N of the n-fold renormalized powers of the stage-w^xi
      // realizer, amplitudes a*n/(n+1)
      Ordinal xi = pred(beta);
      Ordinal stage = omega_pow(xi);
      Ordinal base_delta = xi.is_zero() ? Ordinal() : Ordinal::from_int(1);
      TermPtr unit = realize_irreducible(stage, Rat(1), Rat(Int(1), Int(2)), base_delta).term;
      long N = 1;
      while (a / N > eps) ++N;
      UnionStream st;
      st.kind = UnionStream::Kind::PowerTower;
      st.base = unit;
      st.amp = amp_seq(a);
      st.base_stage = stage;
      st.scale_sup = alpha;
      // member bound: amp(n)/n times the unit h-bound
      st.norm_h = seq_mul(st.amp, RationalSeq(Poly::constant(numerator(unit->bound)),
                                              Poly{{Int(0), denominator(unit->bound)}}));
      term = union_candidate(std::move(st), N);
    } else {
      // limit exponent: union over the fundamental sequence with budgets eps/n
      long N = 2;
      while (!(omega_pow(fundamental_seq(beta, Int(N - 1))) > delta)) ++N;
      Rat a_copy = a, eps_copy = eps;
      Ordinal beta_copy = beta;
      auto guard = [beta_copy](long n) { return omega_pow(fundamental_seq(beta_copy, Int(n - 1))); };
      RationalSeq amp = amp_seq(a);
      RationalSeq eps_over_n(Poly::constant(numerator(eps)),
                             Poly{{Int(0), denominator(eps)}}, 1);
      auto make = [a_copy, eps_copy, beta_copy, guard](long n) {
        Ordinal stage_n = omega_pow(fundamental_seq(beta_copy, Int(n)));
        Rat a_n = a_copy * n / (n + 1);
        Rat eps_n = eps_copy / n;
        if (eps_n >= a_n) eps_n = a_n / 2;
        return realize_irreducible(stage_n, a_n, eps_n, guard(n)).term;
      };
      UnionStream st;
      st.kind = UnionStream::Kind::Realized;
      st.make = make;
      st.amp = amp;
      st.scale_sup = alpha;
      st.member_guard = guard;
      st.guard_eps = eps_over_n;
      // declared ||h^n||: the member budgets bound the limits from above
      st.norm_h = eps_over_n;
      term = union_candidate(std::move(st), N);
    }
  }

  TransfiniteProfile p = profile_closed_form(term);
  expect(p.alpha0 == alpha, "alpha0 of the irreducible realizer");
  expect(p.at_marked_at(alpha) == a, "basepoint value at alpha");
  if (!delta.is_zero())
    expect(p.norm_at(delta) <= eps, "||u_delta|| <= eps");
  expect(p.bound_a == a, "bound");
  return {term, p};
}

namespace {

// fold a left-to-right factor listing into the product term (rightmost fires
// first) and the matching profile
TermPtr fold_chain(const std::vector<TermPtr>& parts) {
  TermPtr acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = product(acc, parts[i]);
  return acc;
}

}  // namespace

Realization realize(const Ordinal& alpha, const Rat& a) {
  if (alpha.is_zero()) throw DomainError("realize requires alpha > 0");
  std::vector<Rat> w = select_weights(alpha, a);
  const auto& terms = alpha.terms();
  std::vector<TermPtr> parts;  // H_N, ..., H_1 (leftmost first)
  for (std::size_t j = terms.size(); j-- > 0;) {
    const Ordinal stage = omega_pow(terms[j].exponent);
    long m = static_cast<long>(terms[j].coeff);
    Ordinal d = terms[j].exponent.is_zero() ? Ordinal() : Ordinal::from_int(1);
    TermPtr F = realize_irreducible(stage, w[j], w[j] / 2, d).term;
    parts.push_back(m == 1 ? F : renorm_power(F, m));
  }
  TermPtr H = fold_chain(parts);
  TransfiniteProfile p = profile_closed_form(H);
  expect(p.alpha0 == alpha, "alpha0 of the realizer equals alpha");
  expect(p.at_marked_at(alpha) == a, "basepoint value a at alpha");
  expect(p.bound_a == a, "norm bound a");
  expect(p.strict_below, "strict norm bound below alpha");
  return {H, p};
}

Realization realize_successor_plus(const Ordinal& alpha, const Rat& a) {
  if (alpha.is_finite())
    throw HypothesisViolation("successor-plus realizer", "requires an infinite alpha");
  const auto& terms = alpha.terms();
  std::size_t N = terms.size();
  std::vector<Rat> w = select_weights(alpha, a);

  auto stage_one = [](const Ordinal& irr_stage, const Rat& amount) -> TermPtr {
    // delayed marked points on the Thm-style union: b = 2/3 amount, c = b/2
    Rat b = amount * 2 / 3;
    Realization F = realize_irreducible(irr_stage, b, b / 2, Ordinal::from_int(1));
    return marked_delay(F.term, b / 2);
  };

  bool last_infinite = !terms[N - 1].exponent.is_zero();
  std::vector<TermPtr> parts;
  TransfiniteProfile p;
  if (last_infinite) {
    // F'_N x (H_N^{m_N-1}) x H_{N-1} x ... x H_1
    Ordinal stage_N = omega_pow(terms[N - 1].exponent);
    long mN = static_cast<long>(terms[N - 1].coeff);
    parts.push_back(stage_one(stage_N, w[N - 1] / mN));
    if (mN > 1) {
      TermPtr F_N = realize_irreducible(stage_N, w[N - 1] * (mN - 1) / mN,
                                        w[N - 1] * (mN - 1) / (2 * mN), Ordinal::from_int(1))
                        .term;
      parts.push_back(renorm_power(F_N, mN - 1));
    }
    for (std::size_t j = N - 1; j-- > 0;) {
      Ordinal stage = omega_pow(terms[j].exponent);
      long m = static_cast<long>(terms[j].coeff);
      Ordinal d = terms[j].exponent.is_zero() ? Ordinal() : Ordinal::from_int(1);
      TermPtr F = realize_irreducible(stage, w[j], w[j] / 2, d).term;
      parts.push_back(m == 1 ? F : renorm_power(F, m));
    }
    TermPtr H = fold_chain(parts);
    p = profile_closed_form(H);
    Realization out{H, p};
    expect(p.alpha0 == add(alpha, Ordinal::from_int(1)), "alpha0 = alpha + 1");
    expect(p.at_marked_at(p.alpha0) == a, "basepoint value a at alpha + 1");
    return out;
  }

  // w^{beta_N} = 1: the extra constraint a_{N-1}/(3 m_{N-1}) >= a_N, imposed by
  // rescaling a_N downward and renormalizing the total back to a
  if (N < 2) throw DomainError("finite alpha cannot reach the successor-plus case");
  long mN1 = static_cast<long>(terms[N - 2].coeff);
  Rat capN = w[N - 2] / (3 * mN1);
  if (w[N - 1] > capN) {
    w[N - 1] = capN;
    Rat total = 0;
    for (const auto& v : w) total += v;
    for (auto& v : w) v = v * a / total;
  }
  long mN = static_cast<long>(terms[N - 1].coeff);
  TermPtr F_N = realize_irreducible(Ordinal::from_int(1), w[N - 1], w[N - 1] / 2, Ordinal()).term;
  TermPtr H_N = mN == 1 ? F_N : renorm_power(F_N, mN);
  Ordinal stage_N1 = omega_pow(terms[N - 2].exponent);
  TermPtr Fp = stage_one(stage_N1, w[N - 2] / mN1);
  std::vector<TermPtr> rest{Fp};
  if (mN1 > 1) {
    TermPtr F_N1 = realize_irreducible(stage_N1, w[N - 2] * (mN1 - 1) / mN1,
                                       w[N - 2] * (mN1 - 1) / (2 * mN1), Ordinal::from_int(1))
                       .term;
    rest.push_back(renorm_power(F_N1, mN1 - 1));
  }
  for (std::size_t j = N - 2; j-- > 0;) {
    Ordinal stage = omega_pow(terms[j].exponent);
    long m = static_cast<long>(terms[j].coeff);
    Ordinal d = terms[j].exponent.is_zero() ? Ordinal() : Ordinal::from_int(1);
    TermPtr F = realize_irreducible(stage, w[j], w[j] / 2, d).term;
    rest.push_back(m == 1 ? F : renorm_power(F, m));
  }
  // associate as H_N x (rest-chain): every floor increment of the grouped
  // right-hand chain then dominates the base-stage total riding on it
  TermPtr H = product(H_N, fold_chain(rest));
  p = profile_closed_form(H);
  expect(p.alpha0 == add(alpha, Ordinal::from_int(1)), "alpha0 = alpha + 1");
  expect(p.at_marked_at(p.alpha0) == a, "basepoint value a at alpha + 1");
  return {H, p};
}

Realization realize_in_space(const SpacePtr& E, const Ordinal& gamma, const Rat& a) {
  Ordinal budget = rho(E);
  if (gamma > budget)
    throw HypothesisViolation(
        "realization range",
        "stage " + format_ordinal(gamma) + " exceeds the rank budget rho = " +
            format_ordinal(budget) + " of the space; no candidate sequence can accumulate "
            "past its Cantor-Bendixson budget");
  if (gamma.is_zero()) {
    TermPtr z = embed_zero(nullptr, E);
    TransfiniteProfile p;
    p.alpha0 = Ordinal();
    p.bound_a = 0;
    return {z, p};
  }
  Ordinal cb = cb_rank(E);
  Realization inner =
      (!cb.is_finite() && gamma == cb) ? realize_successor_plus(pred(cb), a) : realize(gamma, a);
  TermPtr emb = embed_zero(inner.term, E);
  TransfiniteProfile p = inner.profile;
  p.notes.push_back("supported on a clopen copy inside the host class");
  return {emb, p};
}

}  // namespace tel

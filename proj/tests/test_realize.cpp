#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tel/realize.hpp"

using namespace tel;

namespace {
PointPath o(const std::string& lit) { return PointPath::ord(parse_ordinal(lit)); }
Rat q(long p, long d) { return Rat(Int(p), Int(d)); }
}  // namespace

TEST_CASE("weight scheme") {
  auto w1 = select_weights(parse_ordinal("w*2+3"), Rat(1));
  REQUIRE(w1.size() == 2);
  CHECK(w1[0] == q(3, 4));
  CHECK(w1[1] == q(1, 4));
  // the displayed inequality: a_1/m_1 = 3/8 >= 1/4
  CHECK(w1[0] / 2 >= w1[1]);

  auto w2 = select_weights(parse_ordinal("5"), Rat(1));
  REQUIRE(w2.size() == 1);
  CHECK(w2[0] == Rat(1));

  auto w3 = select_weights(parse_ordinal("w^2+w+1"), Rat(1));
  REQUIRE(w3.size() == 3);
  CHECK(w3[0] == q(6, 9));
  CHECK(w3[1] == q(2, 9));
  CHECK(w3[2] == q(1, 9));
  CHECK(w3[0] / 1 >= w3[1] + w3[2]);
  CHECK(w3[1] / 1 >= w3[2]);

  // weights always satisfy the inequality, symbolically, on a sweep
  for (const char* lit : {"w^2*3+w*2+5", "w*7+2", "w^3+w", "w^2*2+1"}) {
    Ordinal alpha = parse_ordinal(lit);
    auto w = select_weights(alpha, q(3, 5));
    Rat total = 0, rest = 0;
    for (const auto& v : w) total += v;
    CHECK(total == q(3, 5));
    for (std::size_t j = w.size(); j-- > 0;) {
      if (j + 1 < w.size())
        CHECK(w[j] / Rat(alpha.terms()[j].coeff) >= rest);
      rest += w[j];
    }
  }
  CHECK_THROWS_AS(select_weights(Ordinal(), Rat(1)), DomainError);
}

TEST_CASE("irreducible realizer, stage 1") {
  Realization r = realize_irreducible(Ordinal::from_int(1), q(2, 3), q(1, 3), Ordinal());
  CHECK(r.term->kind == CandidateTerm::Kind::BaseStep);
  CHECK(r.profile.alpha0 == Ordinal::from_int(1));
  CHECK(r.profile.at_marked_at(Ordinal::from_int(1)) == q(2, 3));
}

TEST_CASE("irreducible realizer, stage w") {
  Realization r = realize_irreducible(Ordinal::omega(), Rat(1), q(1, 2), Ordinal::from_int(1));
  CHECK(r.profile.alpha0 == Ordinal::omega());
  CHECK(r.profile.at_marked_at(Ordinal::omega()) == 1);
  for (const char* g : {"1", "2", "9"}) CHECK(r.profile.at_marked_at(parse_ordinal(g)) == 0);
  CHECK(r.profile.norm_at(Ordinal::from_int(1)) <= q(1, 2));  // the eps guarantee

  Engine eng;
  PointPath inf = PointPath::infinity();
  CHECK(eng.u_eval(r.term, Ordinal::from_int(3), inf) == 0);
  CHECK(eng.u_eval(r.term, Ordinal::omega(), inf) == 1);
  CHECK(eng.u_eval(r.term, parse_ordinal("w+1"), inf) == 1);
  CHECK_THROWS_AS(realize_irreducible(Ordinal::omega(), Rat(1), Rat(2), Ordinal::from_int(1)),
                  HypothesisViolation);
  CHECK_THROWS_AS(realize_irreducible(parse_ordinal("w*2"), Rat(1), q(1, 2), Ordinal()),
                  DomainError);
}

TEST_CASE("realize sweep reports alpha0 = alpha") {
  for (const char* lit : {"1", "2", "3", "w*2+1", "w^2*3+w*2+5"}) {
    Ordinal alpha = parse_ordinal(lit);
    Realization r = realize(alpha, Rat(1));
    CHECK(r.profile.alpha0 == alpha);
    CHECK(r.profile.at_marked_at(alpha) == 1);
    CHECK(r.profile.bound_a == 1);
    CHECK(r.profile.strict_below);
  }
}

TEST_CASE("realize(1) and realize(2) oracle values") {
  Engine eng;
  Realization r1 = realize(Ordinal::from_int(1), q(5, 8));
  CHECK(r1.profile.alpha0 == Ordinal::from_int(1));
  CHECK(eng.u_eval(r1.term, Ordinal::from_int(1), profile_basepoint(r1.term)) == q(5, 8));
  for (const char* l : {"0", "3", "11"})
    CHECK(eng.u_eval(r1.term, Ordinal::from_int(2), o(l)) == 0);

  Realization r2 = realize(Ordinal::from_int(2), Rat(1));
  PointPath m = profile_basepoint(r2.term);
  CHECK(eng.u_eval(r2.term, Ordinal::from_int(1), m) == q(1, 2));
  CHECK(eng.u_eval(r2.term, Ordinal::from_int(2), m) == 1);
}

TEST_CASE("full witness verification for alpha <= 3") {
  Budget b = Budget::fast();
  for (int alpha : {1, 2, 3}) {
    Realization r = realize(Ordinal::from_int(alpha), Rat(1));
    VerifyReport rep = verify_profile(r.term, r.profile, witness_set(r.term, 2), b);
    CHECK(rep.all_match);
    CHECK(rep.skipped.empty());
  }
}

TEST_CASE("marked-point verification for w, w+1, w^2") {
  Budget b = Budget::full();
  for (const char* lit : {"w", "w+1", "w^2"}) {
    Realization r = realize(parse_ordinal(lit), Rat(1));
    VerifyReport rep = verify_profile(r.term, r.profile, {}, b);
    CHECK(rep.all_match);
    CHECK(rep.skipped.empty());
  }
}

TEST_CASE("strictness below alpha with exact rationals") {
  Realization r = realize(parse_ordinal("w"), Rat(1));
  Engine eng;
  for (const char* g : {"1", "2", "5"}) {
    Rat n = eng.u_norm(r.term, parse_ordinal(g));
    CHECK(n < 1);
    CHECK(n == r.profile.norm_at(parse_ordinal(g)));
  }
}

TEST_CASE("successor-plus stage values") {
  Realization r = realize_successor_plus(Ordinal::omega(), Rat(1));
  CHECK(r.profile.alpha0 == parse_ordinal("w+1"));
  CHECK(r.profile.at_marked_at(Ordinal::from_int(1)) == q(1, 3));
  CHECK(r.profile.at_marked_at(Ordinal::from_int(7)) == q(1, 3));
  CHECK(r.profile.at_marked_at(Ordinal::omega()) == q(2, 3));
  CHECK(r.profile.at_marked_at(parse_ordinal("w+1")) == 1);
  // the oracle reproduces the same staircase at the compactification point
  Engine eng;
  PointPath inf = PointPath::infinity();
  CHECK(eng.u_eval(r.term, Ordinal::from_int(1), inf) == q(1, 3));
  CHECK(eng.u_eval(r.term, Ordinal::from_int(4), inf) == q(1, 3));
  CHECK(eng.u_eval(r.term, Ordinal::omega(), inf) == q(2, 3));
  CHECK(eng.u_eval(r.term, parse_ordinal("w+1"), inf) == 1);
  CHECK(eng.u_eval(r.term, parse_ordinal("w+2"), inf) == 1);

  CHECK_THROWS_AS(realize_successor_plus(Ordinal::from_int(3), Rat(1)), HypothesisViolation);
}

TEST_CASE("successor-plus through the product case") {
  Realization r = realize_successor_plus(parse_ordinal("w+1"), Rat(1));
  CHECK(r.profile.alpha0 == parse_ordinal("w+2"));
  CHECK(r.profile.at_marked_at(parse_ordinal("w+2")) == 1);
  Realization r2 = realize_successor_plus(parse_ordinal("w*2"), Rat(1));
  CHECK(r2.profile.alpha0 == parse_ordinal("w*2+1"));
}

TEST_CASE("realized spaces carry the class of the ordinal interval") {
  for (const char* lit : {"1", "2", "3", "w"}) {
    Realization r = realize(parse_ordinal(lit), Rat(1));
    auto cls = canonical_class(r.term->space);
    CHECK(cls.first == add(parse_ordinal(lit), Ordinal::from_int(1)));
    CHECK(cls.second == 1);
  }
}

TEST_CASE("property (P) holds at probed non-isolated points of realizers") {
  for (const char* lit : {"1", "2", "w"}) {
    Realization r = realize(parse_ordinal(lit), Rat(1));
    PointPath m = profile_basepoint(r.term);
    CHECK(has_property_P(r.term, m, 2, 8));
  }
}

TEST_CASE("realize_in_space respects the rank budget") {
  SpacePtr E = omega_space(Ordinal::from_int(2), 1);
  Realization r1 = realize_in_space(E, Ordinal::from_int(1), Rat(1));
  CHECK(r1.profile.alpha0 == Ordinal::from_int(1));
  // support sits in a clopen slot; the class matches the host
  CHECK(canonical_class(r1.term->space) == canonical_class(E));
  Engine eng;
  CHECK(eng.u_eval(r1.term, Ordinal::from_int(1), PointPath::infinity()) == 0);
  CHECK(eng.u_eval(r1.term, Ordinal::from_int(1), profile_basepoint(r1.term)) == 1);

  Realization r2 = realize_in_space(E, Ordinal::from_int(2), Rat(1));
  CHECK(r2.profile.alpha0 == Ordinal::from_int(2));
  CHECK_THROWS_AS(realize_in_space(E, Ordinal::from_int(3), Rat(1)), HypothesisViolation);

  Realization r0 = realize_in_space(E, Ordinal(), Rat(1));
  CHECK(r0.profile.alpha0 == Ordinal());

  // infinite budget admits the extra successor at the top
  SpacePtr W = omega_space(Ordinal::omega(), 1);
  Realization rw1 = realize_in_space(W, parse_ordinal("w+1"), Rat(1));
  CHECK(rw1.profile.alpha0 == parse_ordinal("w+1"));
  CHECK_THROWS_AS(realize_in_space(W, parse_ordinal("w+2"), Rat(1)), HypothesisViolation);
}

TEST_CASE("verification passes on embedded realizations") {
  Budget b = Budget::fast();
  SpacePtr E = omega_space(Ordinal::from_int(2), 1);
  Realization r = realize_in_space(E, Ordinal::from_int(2), Rat(1));
  VerifyReport rep = verify_profile(r.term, r.profile, {PointPath::infinity()}, b);
  CHECK(rep.all_match);
  CHECK(rep.skipped.empty());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tel/realize.hpp"

using namespace tel;

namespace {

PointPath o(const std::string& lit) { return PointPath::ord(parse_ordinal(lit)); }

// Frozen first-principles table for the renormalized square of a base step of
// height a on (w+1)^2, worked by hand from the envelope recursion:
//   stage 1: the active coordinate's tau mass a/2 accumulates at every point
//            whose right coordinate is the basepoint, and at the corner;
//   stage 2: the slice direction stacks a second a/2 at the corner only.
struct SquareOracle {
  Rat a;
  Rat u(long gamma, bool left_at_top, bool right_at_top) const {
    Rat half = a / 2;
    if (gamma == 0) return 0;
    if (!right_at_top) return 0;             // right coordinate isolated: clopen-local zero
    if (!left_at_top) return half;           // (finite, top): one layer
    return gamma >= 2 ? a : half;            // corner: second layer at stage 2
  }
};

}  // namespace

TEST_CASE("u_eval ground cases") {
  Engine eng;
  TermPtr H = base_step(Rat(Int(2), Int(5)));
  CHECK(eng.u_eval(H, Ordinal(), o("w")) == 0);
  CHECK(eng.u_eval(H, Ordinal::from_int(1), o("w")) == Rat(Int(2), Int(5)));
  CHECK(eng.u_eval(H, Ordinal::from_int(3), o("w")) == Rat(Int(2), Int(5)));
  for (const char* l : {"0", "1", "17"})
    for (const char* g : {"1", "2", "w"})
      CHECK(eng.u_eval(H, parse_ordinal(g), o(l)) == 0);
}

TEST_CASE("renormalized square agrees with the hand oracle") {
  for (Rat a : {Rat(1), Rat(Int(2), Int(3))}) {
    TermPtr H = renorm_power(base_step(a), 2);
    SquareOracle ora{a};
    Engine eng;
    for (long g = 0; g <= 3; ++g) {
      for (const char* l : {"0", "4", "w"}) {
        for (const char* r : {"0", "4", "w"}) {
          PointPath x = PointPath::pair(o(l), o(r));
          Rat want = ora.u(g, std::string(l) == "w", std::string(r) == "w");
          CHECK(eng.u_eval(H, Ordinal::from_int(g), x) == want);
        }
      }
    }
  }
}

TEST_CASE("u_norm by maximization over rank-stratified witnesses") {
  TermPtr H = renorm_power(base_step(Rat(1)), 2);
  Engine eng;
  // independent route: maximize u over the witness stratification
  Rat best = 0;
  for (const auto& x : witness_set(H, 3)) best = std::max(best, eng.u_eval(H, Ordinal::from_int(1), x));
  CHECK(best == Rat(Int(1), Int(2)));
  CHECK(eng.u_norm(H, Ordinal::from_int(1)) == Rat(Int(1), Int(2)));
  CHECK(eng.u_norm(H, Ordinal::from_int(2)) == Rat(1));
  CHECK(eng.u_norm(base_step(Rat(Int(3), Int(7))), Ordinal::from_int(1)) == Rat(Int(3), Int(7)));
  CHECK(eng.u_norm(base_step(Rat(1)), Ordinal()) == 0);
}

TEST_CASE("monotone in gamma on probes") {
  Engine eng;
  TermPtr terms[] = {base_step(Rat(1)), renorm_power(base_step(Rat(1)), 3),
                     realize(parse_ordinal("w"), Rat(1)).term};
  const char* gammas[] = {"0", "1", "2", "3", "w", "w+1"};
  for (const auto& H : terms) {
    std::vector<PointPath> W = witness_set(H, 2);
    W.resize(std::min<std::size_t>(W.size(), 10));
    for (const auto& x : W) {
      Rat prev = 0;
      for (const char* g : gammas) {
        Rat v = eng.u_eval(H, parse_ordinal(g), x);
        CHECK(v >= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("alpha0 at points") {
  Engine eng;
  TermPtr B = base_step(Rat(Int(1), Int(2)));
  CHECK(eng.alpha0_point(B, o("5")) == Ordinal());
  CHECK(eng.alpha0_point(B, o("w")) == Ordinal::from_int(1));

  Realization R2 = realize(Ordinal::from_int(2), Rat(1));
  CHECK(eng.alpha0_point(R2.term, profile_basepoint(R2.term)) == Ordinal::from_int(2));
}

TEST_CASE("alpha0 global") {
  Engine eng;
  CHECK(eng.alpha0_global(base_step(Rat(1))) == Ordinal::from_int(1));
  CHECK(eng.alpha0_global(embed_zero(nullptr, omega_space(Ordinal::from_int(1), 1))) ==
        Ordinal());
  Realization Rw = realize(Ordinal::omega(), Rat(1));
  CHECK(eng.alpha0_point(Rw.term, PointPath::infinity()) == Ordinal::omega());
}

TEST_CASE("stabilization at alpha0 and strict increase below") {
  Engine eng;
  Realization R = realize(Ordinal::from_int(3), Rat(1));
  PointPath m = profile_basepoint(R.term);
  Rat at = eng.u_eval(R.term, R.profile.alpha0, m);
  Rat next = eng.u_eval(R.term, add(R.profile.alpha0, Ordinal::from_int(1)), m);
  CHECK(at == next);
  // strict increase somewhere at every breakpoint below alpha0
  Rat prev_norm = 0;
  for (const auto& bp : R.profile.breakpoints) {
    Rat n = eng.u_norm(R.term, bp.gamma);
    CHECK(n > prev_norm);
    prev_norm = n;
  }
}

TEST_CASE("profile closed forms") {
  // union of base steps with heights 1/n: basepoint column identically zero,
  // norm 1 at stage 1 (the first member attains it)
  TermPtr U = parse_candidate("union(base(1/n), from=1)");
  TransfiniteProfile p = profile_closed_form(U);
  CHECK(p.at_marked_at(Ordinal::from_int(1)) == 0);
  CHECK(p.at_marked_at(Ordinal::omega()) == 0);
  CHECK(p.norm_at(Ordinal::from_int(1)) == 1);
  CHECK(p.alpha0 == Ordinal::from_int(1));

  TransfiniteProfile p2 = profile_closed_form(renorm_power(base_step(Rat(1)), 2));
  REQUIRE(p2.breakpoints.size() == 2);
  CHECK(p2.breakpoints[0].gamma == Ordinal::from_int(1));
  CHECK(p2.breakpoints[0].at_marked == Rat(Int(1), Int(2)));
  CHECK(p2.breakpoints[1].gamma == Ordinal::from_int(2));
  CHECK(p2.breakpoints[1].at_marked == Rat(1));

  Realization Rw = realize_irreducible(Ordinal::omega(), Rat(1), Rat(Int(1), Int(2)),
                                       Ordinal::from_int(1));
  CHECK(Rw.profile.at_marked_at(Ordinal::from_int(5)) == 0);
  CHECK(Rw.profile.at_marked_at(Ordinal::omega()) == 1);
  CHECK(Rw.profile.norm_at(Ordinal::from_int(1)) <= Rat(Int(1), Int(2)));
  CHECK(Rw.profile.alpha0 == Ordinal::omega());
}

TEST_CASE("verify_profile cross-checks and flags corruption") {
  Realization R = realize(Ordinal::from_int(2), Rat(1));
  Budget b = Budget::fast();
  VerifyReport ok = verify_profile(R.term, R.profile, witness_set(R.term, 2), b);
  CHECK(ok.all_match);
  CHECK(ok.skipped.empty());

  TransfiniteProfile bad = R.profile;
  bad.breakpoints[0].at_marked += Rat(Int(1), Int(7));
  VerifyReport nope = verify_profile(R.term, bad, witness_set(R.term, 2), b);
  CHECK_FALSE(nope.all_match);
  bool found = false;
  for (const auto& row : nope.rows)
    if (!row.match) found = true;
  CHECK(found);
}

TEST_CASE("subadditivity of the transfinite sequence") {
  Engine eng;
  Realization R2 = realize(Ordinal::from_int(2), Rat(1));
  PointPath m = profile_basepoint(R2.term);
  // equality at the basepoint: u_2 = 1 = 1/2 + 1/2
  CHECK(eng.u_eval(R2.term, Ordinal::from_int(2), m) ==
        eng.u_eval(R2.term, Ordinal::from_int(1), m) * 2);
  CHECK(eng.check_subadditivity(R2.term, Ordinal::from_int(1), Ordinal::from_int(1),
                                witness_set(R2.term, 2)));
  TermPtr B = base_step(Rat(1));
  CHECK(eng.check_subadditivity(B, Ordinal(), Ordinal::from_int(2), witness_set(B, 2)));
  CHECK(eng.check_subadditivity(B, Ordinal::from_int(1), Ordinal::from_int(1), {o("w")}));
}

TEST_CASE("pointwise rank bound") {
  Engine eng;
  TermPtr B = base_step(Rat(Int(4), Int(9)));
  CHECK(eng.check_pointwise_bound(B, o("w")));
  CHECK(eng.check_pointwise_bound(B, o("3")));
  Realization Rw = realize(Ordinal::omega(), Rat(1));
  CHECK(eng.check_pointwise_bound(Rw.term, PointPath::infinity()));
}

TEST_CASE("budget exhaustion is an explicit refusal") {
  Budget tiny;
  tiny.max_steps = 5;
  tiny.max_depth = 64;
  Engine eng(tiny);
  Realization R = realize(Ordinal::omega(), Rat(1));
  CHECK_THROWS_AS(eng.u_eval(R.term, Ordinal::omega(), PointPath::infinity()), BudgetExceeded);
}

TEST_CASE("limit-exponent realizers go through the profile path only") {
  Realization R = realize_irreducible(parse_ordinal("w^w"), Rat(1), Rat(Int(1), Int(2)),
                                      Ordinal::from_int(1));
  CHECK(R.profile.alpha0 == parse_ordinal("w^w"));
  CHECK(R.profile.at_marked_at(parse_ordinal("w^w")) == 1);
  CHECK(R.profile.at_marked_at(parse_ordinal("w^3")) == 0);
  // the member stream has no closed tail form, so the pointwise oracle refuses
  // rather than approximating
  Engine eng;
  CHECK_THROWS_AS(eng.u_eval(R.term, parse_ordinal("w^w"), PointPath::infinity()),
                  BudgetExceeded);
}

TEST_CASE("profile JSON shape stays fixed") {
  TransfiniteProfile p = profile_closed_form(base_step(Rat(1)));
  CHECK(p.alpha0 == Ordinal::from_int(1));
  REQUIRE(p.breakpoints.size() == 1);
  CHECK(p.breakpoints[0].gamma == Ordinal::from_int(1));
  CHECK(p.breakpoints[0].norm == 1);
  CHECK(p.breakpoints[0].at_marked == 1);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tel/simplex.hpp"

using namespace tel;

namespace {
PointPath o(const std::string& lit) { return PointPath::ord(parse_ordinal(lit)); }
Rat q(long p, long d) { return Rat(Int(p), Int(d)); }

RelationSimplex two_point_relation() {
  // extreme points: two convergent sequences with the threshold sequence;
  // one closure point b = (b1 + b2)/2 anchored nowhere
  SpacePtr seq = omega_space(Ordinal::from_int(1), 1);
  auto thr = [](const Ordinal& g, const PointPath& p) -> Rat {
    if (p.beta().is_finite()) return 0;
    return g.is_zero() ? Rat(0) : Rat(1);
  };
  RelationSimplex K;
  K.pieces.push_back({seq, nullptr, thr});
  K.pieces.push_back({seq, nullptr, thr});
  ClosureRelation r;
  r.name = "b";
  r.combo.atoms.emplace_back(SimplexPoint::in_piece(0, marked_point(seq)), q(1, 2));
  r.combo.atoms.emplace_back(SimplexPoint::in_piece(1, marked_point(seq)), q(1, 2));
  K.relations.push_back(r);
  return K;
}
}  // namespace

TEST_CASE("harmonic evaluation of finite-support measures") {
  auto f = [](const SimplexPoint& p) -> Rat {
    return p.piece == 0 && p.path == PointPath::ord(Ordinal::omega()) ? Rat(1) : Rat(0);
  };
  FiniteSupportMeasure pm = point_mass(SimplexPoint::in_piece(0, o("w")));
  CHECK(harmonic_eval(f, pm) == 1);

  FiniteSupportMeasure half;
  half.atoms.emplace_back(SimplexPoint::in_piece(0, o("w")), q(1, 2));
  half.atoms.emplace_back(SimplexPoint::in_piece(0, o("3")), q(1, 2));
  CHECK(harmonic_eval(f, half) == q(1, 2));

  FiniteSupportMeasure bad;
  bad.atoms.emplace_back(SimplexPoint::in_piece(0, o("w")), q(1, 2));
  CHECK_THROWS_AS(harmonic_eval(f, bad), DomainError);
  FiniteSupportMeasure dup;
  dup.atoms.emplace_back(SimplexPoint::in_piece(0, o("w")), q(1, 2));
  dup.atoms.emplace_back(SimplexPoint::in_piece(0, o("w")), q(1, 2));
  CHECK_THROWS_AS(harmonic_eval(f, dup), DomainError);
}

TEST_CASE("Bauer-case evaluation is the harmonic extension of the restriction") {
  Engine eng;
  TermPtr H = base_step(Rat(Int(4), Int(5)));
  FiniteSupportMeasure mu;
  mu.atoms.emplace_back(SimplexPoint::in_piece(0, o("w")), q(1, 2));
  mu.atoms.emplace_back(SimplexPoint::in_piece(0, o("0")), q(1, 2));
  CHECK(u_eval_bauer(eng, H, Ordinal(), mu) == 0);
  CHECK(u_eval_bauer(eng, H, Ordinal::from_int(1), mu) == q(2, 5));
  // point mass at the basepoint matches the plain evaluation
  FiniteSupportMeasure pm = point_mass(SimplexPoint::in_piece(0, o("w")));
  CHECK(u_eval_bauer(eng, H, Ordinal::from_int(1), pm) ==
        eng.u_eval(H, Ordinal::from_int(1), o("w")));
  // harmonicity: value at a combination is the combination of values, on a
  // sample of weights
  for (long p = 1; p < 5; ++p) {
    FiniteSupportMeasure nu;
    nu.atoms.emplace_back(SimplexPoint::in_piece(0, o("w")), Rat(Int(p), Int(5)));
    nu.atoms.emplace_back(SimplexPoint::in_piece(0, o("2")), Rat(Int(5 - p), Int(5)));
    CHECK(u_eval_bauer(eng, H, Ordinal::from_int(1), nu) == Rat(Int(p), Int(5)) * q(4, 5));
  }
}

TEST_CASE("fiber maximization over the substitution lattice") {
  Engine eng;
  RelationSimplex K = two_point_relation();
  // at b: keeping the atom gives 0 (no anchor), splitting gives 1
  FiniteSupportMeasure at_b = point_mass(SimplexPoint::closure_point("b"));
  CHECK(embedding_max(eng, K, Ordinal::from_int(1), at_b) == 1);
  CHECK(embedding_max(eng, K, Ordinal(), at_b) == 0);
  // an extreme point is its own fiber
  FiniteSupportMeasure at_b1 = point_mass(SimplexPoint::in_piece(0, o("w")));
  CHECK(embedding_max(eng, K, Ordinal::from_int(1), at_b1) == 1);
  // an isolated extreme point stays at zero
  FiniteSupportMeasure at_c = point_mass(SimplexPoint::in_piece(0, o("4")));
  CHECK(embedding_max(eng, K, Ordinal::from_int(3), at_c) == 0);
  // monotone in the stage and bounded by the restricted norm
  FiniteSupportMeasure mix;
  mix.atoms.emplace_back(SimplexPoint::closure_point("b"), q(1, 3));
  mix.atoms.emplace_back(SimplexPoint::in_piece(0, o("2")), q(2, 3));
  Rat v1 = embedding_max(eng, K, Ordinal::from_int(1), mix);
  Rat v2 = embedding_max(eng, K, Ordinal::from_int(2), mix);
  CHECK(v1 <= v2);
  CHECK(v2 <= 1);
  CHECK(v1 == q(1, 3));
}

TEST_CASE("relation supports must be one level deep") {
  Engine eng;
  RelationSimplex K = two_point_relation();
  ClosureRelation deep;
  deep.name = "c";
  deep.combo.atoms.emplace_back(SimplexPoint::closure_point("b"), Rat(1));
  K.relations.push_back(deep);
  FiniteSupportMeasure at_c = point_mass(SimplexPoint::closure_point("c"));
  CHECK_THROWS_AS(embedding_max(eng, K, Ordinal::from_int(1), at_c), HypothesisViolation);
}

TEST_CASE("the collapse example: restricted stage 2, full stage 1") {
  Example328Report rep = example_3_28();
  CHECK(rep.alpha0_restricted == Ordinal::from_int(2));
  CHECK(rep.alpha0_full == Ordinal::from_int(1));
  CHECK(rep.u1_equals_u2_on_K);
  // the witnessing table contains the closure point with u1 = u2 = 1
  bool found_b = false;
  for (const auto& [name, u1, u2] : rep.u_table) {
    CHECK(u1 == u2);
    if (name == "e_b") {
      found_b = true;
      CHECK(u1 == 1);
    }
  }
  CHECK(found_b);
}

TEST_CASE("harmonic extensions of convex usc data stay usc at probe elements") {
  // finite-support analogue of the usc-preservation fact: along every declared
  // convergent sequence of elements, the limsup of the extension stays below
  // the value at the limit element
  Engine eng;
  RelationSimplex K = two_point_relation();
  auto F = [&](const FiniteSupportMeasure& mu) {
    return embedding_max(eng, K, Ordinal::from_int(1), mu);
  };
  // elements e_{c_n} -> e_{b1}: values 0 -> 1, limsup 0 <= 1
  Rat lim_val = F(point_mass(SimplexPoint::in_piece(0, o("w"))));
  for (long n = 2; n < 7; ++n) {
    Rat v = F(point_mass(SimplexPoint::in_piece(0, o(std::to_string(n)))));
    CHECK(v <= lim_val);
  }
  // mixtures converging to the split of b
  FiniteSupportMeasure split;
  split.atoms.emplace_back(SimplexPoint::in_piece(0, o("w")), q(1, 2));
  split.atoms.emplace_back(SimplexPoint::in_piece(1, o("w")), q(1, 2));
  Rat split_val = F(split);
  for (long n = 2; n < 7; ++n) {
    FiniteSupportMeasure approx;
    approx.atoms.emplace_back(SimplexPoint::in_piece(0, o(std::to_string(n))), q(1, 2));
    approx.atoms.emplace_back(SimplexPoint::in_piece(1, o(std::to_string(n))), q(1, 2));
    CHECK(F(approx) <= split_val);
  }
}

TEST_CASE("stage probes on ordinal-interval spaces") {
  auto res = s_of_k_probe(omega_space(Ordinal::from_int(2), 1),
                          {Ordinal(), Ordinal::from_int(1), Ordinal::from_int(2),
                           Ordinal::from_int(3)});
  REQUIRE(res.size() == 4);
  CHECK(res[0].second);
  CHECK(res[1].second);
  CHECK(res[2].second);
  CHECK_FALSE(res[3].second);

  auto both = s_of_k_probe(omega_space(Ordinal::from_int(1), 1),
                           {Ordinal(), Ordinal::from_int(1)});
  CHECK(both[0].second);
  CHECK(both[1].second);

  auto winf = s_of_k_probe(omega_space(Ordinal::omega(), 1),
                           {Ordinal::omega(), parse_ordinal("w+1")});
  CHECK(winf[0].second);
  CHECK(winf[1].second);
}

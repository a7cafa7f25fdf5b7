#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "tel/ordinal.hpp"

using namespace tel;

namespace {

// Independent model of the ordinals below w^2 as lexicographic pairs (q, r)
// standing for w*q + r. Addition on the model reads off the order type of the
// concatenated order directly: a finite left part is absorbed unless the right
// part is finite too.
struct PairOrd {
  long q, r;
};
PairOrd pair_add(PairOrd a, PairOrd b) {
  if (b.q > 0) return {a.q + b.q, b.r};
  return {a.q, a.r + b.r};
}
Ordinal to_ordinal(PairOrd p) {
  return add(nat_mul(Ordinal::omega(), Int(p.q)), Ordinal::from_int(p.r));
}

Ordinal random_ordinal(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> nterms(0, 3);
  std::uniform_int_distribution<int> coeff(1, 9);
  int k = nterms(rng);
  Ordinal acc;
  for (int i = 0; i < k; ++i) {
    Ordinal expo = depth > 0 ? random_ordinal(rng, depth - 1)
                             : Ordinal::from_int(std::uniform_int_distribution<int>(0, 4)(rng));
    acc = add(acc, Ordinal::single(expo, coeff(rng)));
  }
  return acc;
}

// every way to split a into x + y with y the tail of the CNF (plus coefficient
// splits); complete for the irreducibility criterion
std::vector<std::pair<Ordinal, Ordinal>> splits(const Ordinal& a) {
  std::vector<std::pair<Ordinal, Ordinal>> out;
  const auto& ts = a.terms();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (Int c = 0; c <= ts[i].coeff; ++c) {
      std::vector<Ordinal::Term> head(ts.begin(), ts.begin() + static_cast<long>(i));
      if (c > 0) head.push_back({ts[i].exponent, c});
      std::vector<Ordinal::Term> tail;
      if (c < ts[i].coeff) tail.push_back({ts[i].exponent, ts[i].coeff - c});
      tail.insert(tail.end(), ts.begin() + static_cast<long>(i) + 1, ts.end());
      out.emplace_back(Ordinal::from_terms(head), Ordinal::from_terms(tail));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("parse reads the grammar directly") {
  Ordinal a = parse_ordinal("w^2*3+w*1+4");
  REQUIRE(a.terms().size() == 3);
  CHECK(a.terms()[0].exponent == Ordinal::from_int(2));
  CHECK(a.terms()[0].coeff == 3);
  CHECK(a.terms()[1].exponent == Ordinal::from_int(1));
  CHECK(a.terms()[1].coeff == 1);
  CHECK(a.terms()[2].exponent == Ordinal());
  CHECK(a.terms()[2].coeff == 4);
  CHECK(format_ordinal(a) == "w^2*3+w+4");

  CHECK(parse_ordinal("0").is_zero());
  Ordinal ww = parse_ordinal("w^w");
  REQUIRE(ww.terms().size() == 1);
  CHECK(ww.terms()[0].exponent == Ordinal::omega());
  CHECK(ww.terms()[0].coeff == 1);
}

TEST_CASE("parse rejects bad input with positions") {
  CHECK_THROWS_AS(parse_ordinal("w*0"), ParseError);
  CHECK_THROWS_AS(parse_ordinal("w^"), ParseError);
  CHECK_THROWS_AS(parse_ordinal("3+"), ParseError);
  CHECK_THROWS_AS(parse_ordinal(""), ParseError);
  CHECK_THROWS_AS(parse_ordinal("w^2*3junk"), ParseError);
}

TEST_CASE("round trip: parse(format(x)) = x on 1000 random values") {
  std::mt19937 rng(20240811);
  for (int i = 0; i < 1000; ++i) {
    Ordinal a = random_ordinal(rng, 2);
    CHECK(parse_ordinal(format_ordinal(a)) == a);
  }
}

TEST_CASE("compare is a total order") {
  CHECK(compare(Ordinal::omega(), Ordinal::from_int(5)) > 0);
  Ordinal x = parse_ordinal("w*2+1");
  CHECK(compare(x, x) == 0);
  CHECK(compare(parse_ordinal("w^2"), parse_ordinal("w*99")) > 0);
}

TEST_CASE("add: absorption, merge, and the pair-model oracle below w^2") {
  CHECK(add(Ordinal::from_int(3), Ordinal::omega()) == Ordinal::omega());
  CHECK(add(parse_ordinal("w^2*2"), parse_ordinal("w^2")) == parse_ordinal("w^2*3"));
  // the stated example, frozen from the pair model:
  CHECK(add(parse_ordinal("w+1"), parse_ordinal("w")) == parse_ordinal("w*2"));

  std::mt19937 rng(7);
  std::uniform_int_distribution<long> small(0, 6);
  for (int i = 0; i < 300; ++i) {
    PairOrd pa{small(rng), small(rng)}, pb{small(rng), small(rng)};
    CHECK(add(to_ordinal(pa), to_ordinal(pb)) == to_ordinal(pair_add(pa, pb)));
  }
}

TEST_CASE("add is associative and monotone on random triples") {
  std::mt19937 rng(99);
  for (int i = 0; i < 200; ++i) {
    Ordinal a = random_ordinal(rng, 1), b = random_ordinal(rng, 1), c = random_ordinal(rng, 1);
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(a <= add(a, b));
  }
}

TEST_CASE("nat_mul equals the fold of add") {
  CHECK(nat_mul(Ordinal::omega(), 3) == parse_ordinal("w*3"));
  CHECK(nat_mul(parse_ordinal("w+1"), 2) == parse_ordinal("w*2+1"));
  CHECK(nat_mul(Ordinal(), 7) == Ordinal());
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    Ordinal a = random_ordinal(rng, 1);
    int n = std::uniform_int_distribution<int>(1, 6)(rng);
    Ordinal folded;
    for (int j = 0; j < n; ++j) folded = add(folded, a);
    CHECK(nat_mul(a, n) == folded);
  }
}

TEST_CASE("omega_pow") {
  CHECK(omega_pow(Ordinal()) == Ordinal::from_int(1));
  CHECK(omega_pow(Ordinal::from_int(1)) == Ordinal::omega());
  CHECK(omega_pow(Ordinal::omega()) == parse_ordinal("w^w"));
}

TEST_CASE("is_irreducible matches the split-enumeration oracle") {
  CHECK(is_irreducible(parse_ordinal("w^2")));
  CHECK_FALSE(is_irreducible(parse_ordinal("w*2")));
  CHECK(is_irreducible(Ordinal::from_int(1)));
  CHECK_THROWS_AS(is_irreducible(Ordinal()), DomainError);

  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    Ordinal a = random_ordinal(rng, 1);
    if (a.is_zero()) continue;
    bool oracle = true;
    for (const auto& [x, y] : splits(a)) {
      if (x >= y && !y.is_zero()) {
        // a = x + y must reproduce a for the split to count
        if (add(x, y) == a) oracle = false;
      }
    }
    CHECK(is_irreducible(a) == oracle);
  }
}

TEST_CASE("classify") {
  auto k1 = classify(parse_ordinal("w^2+5"));
  REQUIRE(k1.tag == OrdTag::Successor);
  CHECK(*k1.predecessor == parse_ordinal("w^2+4"));
  CHECK(classify(parse_ordinal("w^2")).tag == OrdTag::Limit);
  CHECK(classify(Ordinal()).tag == OrdTag::Zero);
}

TEST_CASE("fundamental sequences follow the canonical rules") {
  CHECK(fundamental_seq(Ordinal::omega(), 3) == Ordinal::from_int(3));
  CHECK(fundamental_seq(parse_ordinal("w^2"), 4) == parse_ordinal("w*4"));
  CHECK(fundamental_seq(parse_ordinal("w^2+w"), 5) == parse_ordinal("w^2+5"));
  CHECK(fundamental_seq(parse_ordinal("w^w"), 3) == parse_ordinal("w^3"));
  CHECK_THROWS_AS(fundamental_seq(parse_ordinal("w+1"), 2), DomainError);
}

TEST_CASE("fundamental sequences increase strictly and are cofinal") {
  std::mt19937 rng(42);
  for (int i = 0; i < 60; ++i) {
    Ordinal a = random_ordinal(rng, 1);
    if (!is_limit(a)) continue;
    for (long j = 0; j < 5; ++j) {
      Ordinal s = fundamental_seq(a, j);
      Ordinal t = fundamental_seq(a, j + 1);
      CHECK(s < t);
      CHECK(t < a);
    }
    // cofinal against a probe set of smaller ordinals
    std::vector<Ordinal> probes{Ordinal(), Ordinal::from_int(3), fundamental_seq(a, 2)};
    for (const auto& c : probes) {
      if (!(c < a)) continue;
      bool passed = false;
      for (long j = 0; j < 64 && !passed; ++j) passed = c < fundamental_seq(a, j);
      CHECK(passed);
    }
  }
}

TEST_CASE("left_subtract solves a + g = b") {
  std::mt19937 rng(123);
  for (int i = 0; i < 200; ++i) {
    Ordinal a = random_ordinal(rng, 1), g = random_ordinal(rng, 1);
    Ordinal b = add(a, g);
    CHECK(add(a, left_subtract(a, b)) == b);
  }
}

TEST_CASE("natural sum is commutative and merges exponents") {
  CHECK(natural_sum(Ordinal::from_int(1), Ordinal::omega()) == parse_ordinal("w+1"));
  CHECK(natural_sum(parse_ordinal("w+1"), parse_ordinal("w^2+w")) ==
        parse_ordinal("w^2+w*2+1"));
  std::mt19937 rng(77);
  for (int i = 0; i < 100; ++i) {
    Ordinal a = random_ordinal(rng, 1), b = random_ordinal(rng, 1);
    CHECK(natural_sum(a, b) == natural_sum(b, a));
    CHECK(natural_sum(a, b) >= add(a, b));
  }
}

TEST_CASE("compound exponents parenthesize canonically") {
  Ordinal a = omega_pow(parse_ordinal("w*2"));
  CHECK(format_ordinal(a) == "w^(w*2)");
  CHECK(parse_ordinal(format_ordinal(a)) == a);
  Ordinal b = omega_pow(parse_ordinal("w+1"));
  CHECK(format_ordinal(b) == "w^(w+1)");
  CHECK(parse_ordinal("w^w+1") == add(parse_ordinal("w^w"), Ordinal::from_int(1)));
}

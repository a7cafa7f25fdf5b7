#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tel/space.hpp"

namespace tel {

struct CandidateTerm;
using TermPtr = std::shared_ptr<const CandidateTerm>;

// Member stream of a disjoint-union candidate. The paper-facing shapes are
// (a) finitely many distinct terms then a constant tail, and (b) closed-form
// templates in the index n; the templates here are the ones the realization
// constructions need.
struct UnionStream {
  enum class Kind {
    FiniteThenConstant,  // prefix members, then tail forever
    ScaledCopies,        // member(n) = scale(n) * base
    PowerTower,          // member(n) = (1/n) * (amp(n)*base)^{x n}
    Realized             // member(n) = make(n), no closed tail forms
  };
  Kind kind = Kind::FiniteThenConstant;
  std::vector<TermPtr> prefix;
  TermPtr tail;
  TermPtr base;        // ScaledCopies / PowerTower (unit amplitude)
  RationalSeq scale;   // ScaledCopies
  RationalSeq amp;     // PowerTower amplitude a_n
  Ordinal base_stage;  // PowerTower: the base's single jump stage w^beta
  std::function<TermPtr(long)> make;  // Realized
  Ordinal scale_sup;   // supremum of member stages = limit stage of the union
  RationalSeq norm_h;  // declared ||h^n|| profile
  // Realized streams: member n is built with ||u_gamma|| <= guard_eps(n) for
  // all gamma below member_guard(n) (the per-member budget of the limit case)
  std::function<Ordinal(long)> member_guard;
  RationalSeq guard_eps;
};

struct CandidateTerm {
  enum class Kind {
    BaseStep,     // on w+1: h_k(m) = a*[k > m], h_k(marked) = 0
    Union,        // disjoint union, h(infinity) = 0
    Product,      // h_k(x,y) = left_k(x) if y marked else right_k(y)
    RenormPower,  // (1/p) * inner^{x p}
    Restrict,     // clopen restriction
    EmbedZero,    // inner on a clopen slot of a host-compatible space, 0 off it
    MarkedDelay   // union with member marked points re-valued: h_k(0_n) = c*[k > n]
  };
  Kind kind;
  SpacePtr space;
  Rat bound;  // declared ||h||
  bool uscd = true;

  Rat a;               // BaseStep
  UnionStream stream;  // Union
  long start = 1;      // Union
  TermPtr left, right; // Product
  TermPtr inner;       // RenormPower/Restrict/EmbedZero/MarkedDelay
  long power = 1;      // RenormPower
  TermPtr expansion;   // RenormPower: the product chain it abbreviates
  ClopenSelector sel;  // Restrict
  SpacePtr host;       // EmbedZero: the space whose class the embedding fills
  long slot = 1;       // EmbedZero: family index carrying the inner copy
  Rat delay;           // MarkedDelay
};

// Constructors (side conditions validated; violations raise HypothesisViolation
// naming the failing hypothesis).
TermPtr base_step(const Rat& a);
TermPtr union_candidate(UnionStream stream, long start);
TermPtr product(TermPtr F, TermPtr G);
TermPtr renorm_power(TermPtr F, long p);
TermPtr restrict_candidate(TermPtr H, ClopenSelector sel);
// Embeds H into a clopen slot of a space with the canonical class of `host`;
// passing a null H gives the zero candidate on `host` itself.
TermPtr embed_zero(TermPtr H, SpacePtr host);
TermPtr marked_delay(TermPtr U, const Rat& c);
// c * H by structural rewrite: the scalar distributes to the leaves, so every
// term keeps one of the combinator shapes above.
TermPtr scaled(TermPtr H, const Rat& c);

// Materialize member n of a union (or delay-wrapped union) stream.
TermPtr stream_member(const CandidateTerm& u, long n);

// Exact pointwise evaluation.
Rat eval_h(const TermPtr& H, long k, const PointPath& x);
KValue eval_h_kv(const TermPtr& H, const PointPath& x);
Rat eval_limit(const TermPtr& H, const PointPath& x);
Rat eval_tau(const TermPtr& H, long k, const PointPath& x);
KValue eval_tau_kv(const TermPtr& H, const PointPath& x);

// A bounded point function that can also report suprema over arbitrarily
// late punctured tail neighborhoods (the evaluability contract that makes
// the u.s.c. envelope computable).
struct PointFn {
  Rat bound;
  std::function<Rat(const PointPath&)> eval;
  // sup of the function over U_i \ {x} for arbitrarily large i (exact limit
  // of the shrinking suprema); empty when x is isolated.
  std::function<std::optional<Rat>(const PointPath&)> tail_sup;
};

PointFn const_fn(const SpacePtr& E, const Rat& c);
PointFn indicator_fn(const SpacePtr& E, const PointPath& at, const Rat& value);
PointFn tau_fn(const TermPtr& H, long k);
PointFn diff_fn(const TermPtr& H, long k);  // h_{k+1} - h_k
PointFn sum_fn(const PointFn& f, const PointFn& g);

// max(f(x), limsup_{y->x} f(y)) computed from the tail contract.
Rat usc_envelope_at(const PointFn& f, const SpacePtr& E, const PointPath& x);

enum class Dominance { Yes, No, Unknown };
struct DominanceReport {
  Dominance verdict;
  std::string detail;          // certificate or witness description
  std::optional<PointPath> witness;
  Rat eps;
  long k = 0;
};
// Bounded search for Def-2.17-style uniform domination of F by H.
DominanceReport uniform_dominates(const TermPtr& H, const TermPtr& F,
                                  const std::vector<Rat>& eps_grid, long k_bound);

bool has_property_P(const TermPtr& H, const PointPath& t, long k, long probe_depth);

// Structurally complete witness set: marked points of every subterm plus one
// representative per rank class (the alpha0 witness-reduction set).
std::vector<PointPath> witness_set(const TermPtr& H, long per_stratum = 2);

std::string term_to_json(const TermPtr& H);  // node tree + bounds + norm profile
TermPtr parse_candidate(const std::string& text);
std::string format_candidate(const TermPtr& H);

}  // namespace tel

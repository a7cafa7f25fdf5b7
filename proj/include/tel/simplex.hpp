#pragma once

#include <tuple>

#include "tel/realize.hpp"

namespace tel {

// A point of the closure of ex(K): either a point of one of the clopen pieces
// carrying the extreme space, or a named closure point (a non-extreme element
// whose representing measure is a declared relation).
struct SimplexPoint {
  int piece = -1;       // >= 0: index into RelationSimplex::pieces
  PointPath path;       // piece point
  std::string closure;  // closure point name when piece < 0

  static SimplexPoint in_piece(int piece, PointPath p);
  static SimplexPoint closure_point(std::string name);
  bool operator==(const SimplexPoint& o) const;
  std::string format() const;
};

struct FiniteSupportMeasure {
  std::vector<std::pair<SimplexPoint, Rat>> atoms;  // distinct points, weights positive
  void validate() const;                            // weights sum to 1
};

FiniteSupportMeasure point_mass(SimplexPoint at);

// One clopen piece of closure(ex K) with its candidate data. `u` overrides the
// engine for pieces whose sequence is given directly by a pointwise rule.
struct SimplexPiece {
  SpacePtr space;
  TermPtr cand;  // may be null when `u`/`tau_sup` are provided
  std::function<Rat(const Ordinal&, const PointPath&)> u;
};

struct ClosureRelation {
  std::string name;
  FiniteSupportMeasure combo;  // unique representing measure over piece points
  bool has_anchor = false;     // the closure point may coincide with a piece point
  int anchor_piece = -1;
  PointPath anchor;
};

// Finitely presented Choquet simplex: ex(K) = piece points minus the closure
// points; each closure point carries exactly one relation.
struct RelationSimplex {
  std::vector<SimplexPiece> pieces;
  std::vector<ClosureRelation> relations;
  const ClosureRelation& relation(const std::string& name) const;
};

// integral of f against a finite-support measure
Rat harmonic_eval(const std::function<Rat(const SimplexPoint&)>& f,
                  const FiniteSupportMeasure& mu);

// Bauer case: ex(K) closed, one piece, no relations; u at a convex combination
// is the combination of the u-values on the extreme space.
Rat u_eval_bauer(Engine& eng, const TermPtr& H, const Ordinal& gamma,
                 const FiniteSupportMeasure& mu);

// u^{H|L} at a point of L = closure(ex K)
Rat u_on_closure(Engine& eng, const RelationSimplex& K, const Ordinal& gamma,
                 const SimplexPoint& t);

// max over the fiber of the barycenter map, computed on the substitution
// lattice: every closure-point atom is either kept or replaced by its relation
// (complete for one-level relation supports).
Rat embedding_max(Engine& eng, const RelationSimplex& K, const Ordinal& gamma,
                  const FiniteSupportMeasure& x);

struct Example328Report {
  Ordinal alpha0_restricted;
  Ordinal alpha0_full;
  bool u1_equals_u2_on_K = false;
  std::vector<std::tuple<std::string, Rat, Rat>> u_table;  // element, u1, u2
};
// The two-point-relation simplex where the restricted order of accumulation is
// 2 but the full one collapses to 1.
Example328Report example_3_28();

// For each stage, attempt a realization supported in the space and report
// whether it is admitted (failures are exactly the stages above the rank
// budget).
std::vector<std::pair<Ordinal, bool>> s_of_k_probe(const SpacePtr& E,
                                                   const std::vector<Ordinal>& gammas);

}  // namespace tel

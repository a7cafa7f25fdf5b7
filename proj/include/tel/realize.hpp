#pragma once

#include "tel/transfinite.hpp"

namespace tel {

// Weight scheme for the product chain: backward recurrence
// t_N = 1, t_j = (m_j + 1) * sum_{i>j} t_i, scaled to total a. Guarantees
// strict decrease and the required inequality a_j/m_j >= sum_{i>j} a_i.
std::vector<Rat> select_weights(const Ordinal& alpha, const Rat& a);

struct Realization {
  TermPtr term;
  TransfiniteProfile profile;
};

// Single-jump realizer at an irreducible stage: the base step for stage 1,
// a union of renormalized powers for a successor exponent, a union over the
// fundamental sequence with per-member budgets for a limit exponent.
// Guarantees ||u_delta|| <= eps and the single marked jump to a at alpha.
Realization realize_irreducible(const Ordinal& alpha, const Rat& a, const Rat& eps,
                                const Ordinal& delta);

// Product chain of renormalized powers along the CNF of alpha; the order of
// accumulation is exactly alpha with basepoint value a.
Realization realize(const Ordinal& alpha, const Rat& a);

// Order of accumulation alpha+1 on the class of w^alpha+1 (alpha infinite),
// via the delayed-marked-point stage and the two product cases.
Realization realize_successor_plus(const Ordinal& alpha, const Rat& a);

// Realize gamma <= rho(E) inside a clopen copy carried by a space of E's
// canonical class; gamma above the rank budget is rejected.
Realization realize_in_space(const SpacePtr& E, const Ordinal& gamma, const Rat& a);

}  // namespace tel

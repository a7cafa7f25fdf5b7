#include "tel/simplex.hpp"

#include <algorithm>

namespace tel {

SimplexPoint SimplexPoint::in_piece(int piece, PointPath p) {
  SimplexPoint s;
  s.piece = piece;
  s.path = std::move(p);
  return s;
}

SimplexPoint SimplexPoint::closure_point(std::string name) {
  SimplexPoint s;
  s.piece = -1;
  s.closure = std::move(name);
  return s;
}

bool SimplexPoint::operator==(const SimplexPoint& o) const {
  if (piece != o.piece) return false;
  return piece < 0 ? closure == o.closure : path == o.path;
}

std::string SimplexPoint::format() const {
  return piece < 0 ? closure : "p" + std::to_string(piece) + ":" + path.format();
}

void FiniteSupportMeasure::validate() const {
  Rat total = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].second <= 0) throw DomainError("measure atom weights must be positive");
    total += atoms[i].second;
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[i].first == atoms[j].first) throw DomainError("measure atoms must be distinct");
  }
  if (total != 1) throw DomainError("measure weights must sum to 1, got " + format_rat(total));
}

FiniteSupportMeasure point_mass(SimplexPoint at) {
  FiniteSupportMeasure mu;
  mu.atoms.emplace_back(std::move(at), Rat(1));
  return mu;
}

const ClosureRelation& RelationSimplex::relation(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return r;
  throw DomainError("unknown closure point " + name);
}

Rat harmonic_eval(const std::function<Rat(const SimplexPoint&)>& f,
                  const FiniteSupportMeasure& mu) {
  mu.validate();
  Rat out = 0;
  for (const auto& [p, w] : mu.atoms) out += w * f(p);
  return out;
}

Rat u_eval_bauer(Engine& eng, const TermPtr& H, const Ordinal& gamma,
                 const FiniteSupportMeasure& mu) {
  mu.validate();
  Rat out = 0;
  for (const auto& [p, w] : mu.atoms) {
    if (p.piece != 0)
      throw DomainError(
          "u_eval_bauer needs extreme-space support (closed case); elements with closure-point "
          "mass go through embedding_max");
    out += w * eng.u_eval(H, gamma, p.path);
  }
  return out;
}

Rat u_on_closure(Engine& eng, const RelationSimplex& K, const Ordinal& gamma,
                 const SimplexPoint& t) {
  if (t.piece >= 0) {
    const SimplexPiece& pc = K.pieces[static_cast<std::size_t>(t.piece)];
    return pc.cand ? eng.u_eval(pc.cand, gamma, t.path) : pc.u(gamma, t.path);
  }
  const ClosureRelation& r = K.relation(t.closure);
  if (!r.has_anchor) return 0;  // off the carried copy the restriction vanishes
  const SimplexPiece& pc = K.pieces[static_cast<std::size_t>(r.anchor_piece)];
  return pc.cand ? eng.u_eval(pc.cand, gamma, r.anchor) : pc.u(gamma, r.anchor);
}

Rat embedding_max(Engine& eng, const RelationSimplex& K, const Ordinal& gamma,
                  const FiniteSupportMeasure& x) {
  x.validate();
  // one-level relations only: supports of relations contain no closure points
  for (const auto& r : K.relations)
    for (const auto& [p, w] : r.combo.atoms)
      if (p.piece < 0)
        throw HypothesisViolation("embedding fiber",
                                  "relation supports must avoid closure points");
  std::vector<std::size_t> closure_atoms;
  for (std::size_t i = 0; i < x.atoms.size(); ++i)
    if (x.atoms[i].first.piece < 0) closure_atoms.push_back(i);
  if (closure_atoms.size() > 16) throw BudgetExceeded("too many closure atoms in the fiber");

  Rat best = 0;
  bool first = true;
  for (unsigned long mask = 0; mask < (1ul << closure_atoms.size()); ++mask) {
    // bit set = substitute the relation for the closure atom
    Rat v = 0;
    for (std::size_t i = 0; i < x.atoms.size(); ++i) {
      const auto& [p, w] = x.atoms[i];
      bool subst = false;
      for (std::size_t b = 0; b < closure_atoms.size(); ++b)
        if (closure_atoms[b] == i && (mask & (1ul << b))) subst = true;
      if (!subst) {
        v += w * u_on_closure(eng, K, gamma, p);
      } else {
        const ClosureRelation& r = K.relation(p.closure);
        for (const auto& [q, wq] : r.combo.atoms) v += w * wq * u_on_closure(eng, K, gamma, q);
      }
    }
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

Example328Report example_3_28() {
  Engine eng;
  // piece 0: the realizer with stage 2 on the class of w^2+1, basepoint b
  Realization F1 = realize(Ordinal::from_int(2), Rat(1));
  // pieces 1 and 2: convergent sequences c_n -> b1 and d_n -> b2 carrying the
  // displayed threshold sequence: f_k = 0 on the n-th point while k < n, else 1;
  // its u-values are 0 at the isolated points and 1 at the limit from stage 1 on
  SpacePtr seq_space = omega_space(Ordinal::from_int(1), 1);
  auto threshold_u = [](const Ordinal& g, const PointPath& p) -> Rat {
    if (p.beta().is_finite()) return 0;       // isolated points never accumulate
    return g.is_zero() ? Rat(0) : Rat(1);     // tau spans the whole tail at the limit
  };

  RelationSimplex K;
  K.pieces.push_back({F1.term->space, F1.term, nullptr});
  K.pieces.push_back({seq_space, nullptr, threshold_u});
  K.pieces.push_back({seq_space, nullptr, threshold_u});

  PointPath b1 = marked_point(seq_space);
  ClosureRelation rb;
  rb.name = "b";
  rb.combo.atoms.emplace_back(SimplexPoint::in_piece(1, b1), Rat(Int(1), Int(2)));
  rb.combo.atoms.emplace_back(SimplexPoint::in_piece(2, b1), Rat(Int(1), Int(2)));
  rb.has_anchor = true;
  rb.anchor_piece = 0;
  rb.anchor = marked_point(F1.term->space);
  K.relations.push_back(rb);

  Example328Report rep;
  // restricted order of accumulation: max over the clopen pieces
  Ordinal a0_f1 = eng.alpha0_global(F1.term);
  rep.alpha0_restricted = std::max(a0_f1, Ordinal::from_int(1),
                                   [](const Ordinal& a, const Ordinal& b) { return a < b; });

  // probe elements of K: extreme points, the closure point, and mixtures
  std::vector<std::pair<std::string, FiniteSupportMeasure>> probes;
  probes.emplace_back("e_b", point_mass(SimplexPoint::closure_point("b")));
  probes.emplace_back("e_b1", point_mass(SimplexPoint::in_piece(1, b1)));
  probes.emplace_back("e_b2", point_mass(SimplexPoint::in_piece(2, b1)));
  probes.emplace_back("e_a3",
                      point_mass(SimplexPoint::in_piece(0, PointPath::pair(
                                                               PointPath::ord(Ordinal::from_int(3)),
                                                               PointPath::ord(Ordinal::omega())))));
  probes.emplace_back("e_c2", point_mass(SimplexPoint::in_piece(1, PointPath::ord(Ordinal::from_int(2)))));
  {
    FiniteSupportMeasure mix;
    mix.atoms.emplace_back(SimplexPoint::closure_point("b"), Rat(Int(1), Int(2)));
    mix.atoms.emplace_back(SimplexPoint::in_piece(1, PointPath::ord(Ordinal::from_int(1))),
                           Rat(Int(1), Int(2)));
    probes.emplace_back("(e_b + e_c1)/2", mix);
  }
  {
    FiniteSupportMeasure mix;
    mix.atoms.emplace_back(SimplexPoint::in_piece(1, b1), Rat(Int(1), Int(3)));
    mix.atoms.emplace_back(SimplexPoint::in_piece(2, b1), Rat(Int(2), Int(3)));
    probes.emplace_back("(e_b1 + 2 e_b2)/3", mix);
  }

  bool all_eq = true;
  bool some_positive = false;
  for (const auto& [name, mu] : probes) {
    Rat u1 = embedding_max(eng, K, Ordinal::from_int(1), mu);
    Rat u2 = embedding_max(eng, K, Ordinal::from_int(2), mu);
    rep.u_table.emplace_back(name, u1, u2);
    all_eq = all_eq && u1 == u2;
    some_positive = some_positive || u1 > 0;
  }
  rep.u1_equals_u2_on_K = all_eq;
  rep.alpha0_full = all_eq ? (some_positive ? Ordinal::from_int(1) : Ordinal())
                           : rep.alpha0_restricted;
  return rep;
}

std::vector<std::pair<Ordinal, bool>> s_of_k_probe(const SpacePtr& E,
                                                   const std::vector<Ordinal>& gammas) {
  std::vector<std::pair<Ordinal, bool>> out;
  for (const auto& g : gammas) {
    try {
      Realization r = realize_in_space(E, g, Rat(1));
      out.emplace_back(g, r.profile.alpha0 == g);
    } catch (const HypothesisViolation&) {
      out.emplace_back(g, false);
    }
  }
  return out;
}

}  // namespace tel

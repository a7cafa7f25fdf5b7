#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tel/ordinal.hpp"
#include "tel/seqs.hpp"

namespace tel {

struct SpaceTerm;
using SpacePtr = std::shared_ptr<const SpaceTerm>;

// Address of a point inside a SpaceTerm; shape mirrors the term shape.
class PointPath {
 public:
  enum class Kind { Ord, AtInfinity, InFamily, Pair };

  static PointPath ord(Ordinal beta);
  static PointPath infinity();
  static PointPath in_family(long index, PointPath inner);
  static PointPath pair(PointPath l, PointPath r);

  Kind kind() const { return kind_; }
  const Ordinal& beta() const;        // Ord
  long index() const { return index_; }  // InFamily
  const PointPath& inner() const;     // InFamily
  const PointPath& left() const;      // Pair
  const PointPath& right() const;     // Pair

  std::string format() const;  // "o:<ordinal>" | "inf" | "in(n,p)" | "pair(l,r)"
  static PointPath parse(const std::string& text);

  bool operator==(const PointPath& o) const;
  bool operator!=(const PointPath& o) const { return !(*this == o); }

 private:
  Kind kind_ = Kind::AtInfinity;
  Ordinal beta_;
  long index_ = 0;
  std::vector<PointPath> kids_;
};

// Stream of member spaces for a one-point union, with a declared closed-form
// rank profile so cb_rank terminates without enumerating the stream.
struct SpaceStream {
  std::function<SpacePtr(long)> member;       // defined for i >= start of the union
  std::function<Ordinal(long)> member_rank;   // declared max point rank of member(i)
  enum class TailRank { EventuallyConstant, StrictIncreasingToSup } tail_kind;
  Ordinal tail_rank;  // the constant rank, or the (unattained) supremum
  long prefix_len = 3;  // members before the closed form applies
};

struct ClopenSelector {
  enum class Kind { InitialSegment, FamilyIndexSet } kind;
  Ordinal upto;           // InitialSegment: [0, upto] of an OmegaSpace parent
  std::set<long> indices; // FamilyIndexSet: chosen member indices of a union parent
};

struct SpaceTerm {
  enum class Kind { Omega, Union, Product, Restrict };
  Kind kind;
  // Omega: the ordinal interval [0, w^alpha * n], marked point w^alpha*n
  Ordinal alpha;
  Int n;
  // Union: one-point compactification of member(i), i >= start; marked = infinity
  SpaceStream stream;
  long start = 1;
  // Product
  SpacePtr left, right;
  // Restrict
  SpacePtr parent;
  ClopenSelector sel;
};

SpacePtr omega_space(const Ordinal& alpha, const Int& n);
SpacePtr union_space(SpaceStream stream, long start);
SpacePtr product_space(SpacePtr left, SpacePtr right);
SpacePtr restrict_space(SpacePtr parent, ClopenSelector sel);

PointPath marked_point(const SpacePtr& E);
bool is_member(const SpacePtr& E, const PointPath& x);
Ordinal rank(const SpacePtr& E, const PointPath& x);  // topological rank of x in E
bool is_isolated(const SpacePtr& E, const PointPath& x);
Ordinal cb_rank(const SpacePtr& E);
Int top_rank_count(const SpacePtr& E);
std::pair<Ordinal, Int> canonical_class(const SpacePtr& E);
// Pointwise cap on the order of accumulation: r(x), plus one when infinite.
Ordinal alpha0_rank_bound(const SpacePtr& E, const PointPath& x);

// Clopen neighborhood basis U_i of a non-isolated point, shrinking to {x}.
struct TailBasis {
  std::string describe;                                  // human-readable descriptor
  std::function<bool(const PointPath&)> contains;        // membership in U_i
};
TailBasis tail_basis(const SpacePtr& E, const PointPath& x, long i);

// Subsets for relative Cantor-Bendixson rank.
struct MarkedSubset {
  enum class Kind { IsolatedPoints, ComplementOfFinite, ExplicitUnion } kind;
  std::vector<PointPath> removed;  // ComplementOfFinite
  // ExplicitUnion: per clopen piece (selector on the ambient term), a base selector
  std::vector<std::pair<ClopenSelector, Kind>> pieces;
};

bool subset_contains(const SpacePtr& T, const MarkedSubset& X, const PointPath& t);
Ordinal relative_rank(const SpacePtr& T, const MarkedSubset& X, const PointPath& t);
Ordinal relative_cb_rank(const SpacePtr& T, const MarkedSubset& X);

// rho(E): |E|_CB - 1 when finite, |E|_CB when infinite.
Ordinal rho(const SpacePtr& E);

// CLI literal syntax: omega(alpha,n), union(template, from=N) with `n` as the
// stream index inside the template, prod(A,B).
SpacePtr parse_space(const std::string& text);
std::string format_space(const SpacePtr& E);

}  // namespace tel

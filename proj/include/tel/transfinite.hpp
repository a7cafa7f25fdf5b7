#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "tel/candidate.hpp"

namespace tel {

struct Budget {
  long max_depth = 512;         // recursion depth
  long max_steps = 4000000;     // memoized evaluation steps
  long max_witnesses = 96;
  long timeout_ms = 120000;
  static Budget from_env();  // TEL_BUDGET_PROFILE={fast,full}
  static Budget fast();
  static Budget full();
};

struct Breakpoint {
  Ordinal gamma;
  Rat norm;
  Rat at_marked;
};

// Piecewise summary of ||u_gamma|| and u_gamma at the basepoint across ordinal
// stages. at_marked is constant between listed breakpoints; the norm column is
// exact at the listed stages and piecewise-constant only when
// norm_piecewise_exact is set (infinite-stage unions have norm curves with
// infinitely many genuine breakpoints, summarized at the listed stages plus a
// certified bound).
struct TransfiniteProfile {
  std::vector<Breakpoint> breakpoints;  // ascending gamma, values from gamma on
  Ordinal alpha0;
  Rat bound_a;
  bool norm_piecewise_exact = true;
  bool strict_below = false;  // certified ||u_gamma|| < bound_a for gamma < alpha0
  std::vector<std::string> notes;

  Rat at_marked_at(const Ordinal& g) const;
  Rat norm_at(const Ordinal& g) const;
};

// Exact pointwise transfinite recursion (the oracle path): successor stages
// take k-limits of envelope values computed from tail-basis region suprema;
// limit stages reduce the supremum over smaller stages via the pointwise rank
// cap and the term's stage set.
class Engine {
 public:
  explicit Engine(Budget b = Budget::from_env());

  Rat u_eval(const TermPtr& H, const Ordinal& gamma, const PointPath& x);
  // ||u_gamma + tau_k||; k = -1 means tau = 0, i.e. ||u_gamma||
  Rat u_norm(const TermPtr& H, const Ordinal& gamma, long k = -1);
  Ordinal alpha0_point(const TermPtr& H, const PointPath& x);
  Ordinal alpha0_global(const TermPtr& H);

  bool check_subadditivity(const TermPtr& H, const Ordinal& alpha, const Ordinal& beta,
                           const std::vector<PointPath>& witnesses);
  // alpha0(x) <= r(x) (+1 when infinite)
  bool check_pointwise_bound(const TermPtr& H, const PointPath& x);

  const Budget& budget() const { return budget_; }
  long steps() const { return steps_; }

  struct Ctx;
  using CtxPtr = std::shared_ptr<const Ctx>;

  // internal recursion surface (exposed for the verification tooling)
  Rat u_eval_ctx(const TermPtr& H, const Ordinal& gamma, const PointPath& x, const CtxPtr& ctx);
  KValue tail_sup_kv(const TermPtr& H, const Ordinal& delta, const PointPath& x,
                     const CtxPtr& ctx);
  Rat tail_sup_below(const TermPtr& H, const Ordinal& lambda, const PointPath& x,
                     const CtxPtr& ctx);
  Rat u_sup_below(const TermPtr& H, const Ordinal& lambda, const PointPath& x,
                  const CtxPtr& ctx);
  Rat nu(const TermPtr& H, const Ordinal& gamma, long k, const CtxPtr& ctx);
  Rat nu_below(const TermPtr& H, const Ordinal& lambda, const CtxPtr& ctx);
  std::vector<Ordinal> point_stages(const TermPtr& H, const PointPath& x, const CtxPtr& ctx);

 private:
  SeqBundle members_bundle(const TermPtr& U, const Ordinal& gamma, long k, bool below,
                           const CtxPtr& ctx);
  CtxPtr make_slice_ctx(const TermPtr& G, const CtxPtr& outer);
  // one materialization per stream member, so memo entries stay hot and term
  // addresses stay unique for the engine's lifetime
  TermPtr member_of(const TermPtr& U, long n);
  void pin(const TermPtr& H) { pinned_.insert(H); }
  void tick();
  Budget budget_;
  long steps_ = 0;
  long depth_ = 0;
  std::chrono::steady_clock::time_point deadline_;
  std::map<std::string, Rat> memo_;
  std::map<std::string, KValue> memo_kv_;
  std::map<std::pair<const void*, long>, TermPtr> members_;
  std::set<TermPtr> pinned_;
};

// Closed-form profile assembled bottom-up from the combinators' stage algebra
// (the lemma path, independent of Engine's pointwise recursion).
TransfiniteProfile profile_closed_form(const TermPtr& H);

struct VerifyRow {
  Ordinal gamma;
  std::string point;  // point literal or "<norm>"
  Rat oracle;
  Rat claimed;
  bool match;
};
struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_match = true;
  std::vector<std::string> skipped;  // oracle budget exhaustions (explicit, never silent)
};

// The basepoint the profile's at_marked column refers to: the marked point of
// the underlying space, except for embeddings where it is the image of the
// realization basepoint.
PointPath profile_basepoint(const TermPtr& H);

// Oracle/closed-form cross-check: every breakpoint value at the basepoint, norm
// values at breakpoints, and bound consistency at all witnesses.
VerifyReport verify_profile(const TermPtr& H, const TransfiniteProfile& P,
                            const std::vector<PointPath>& witnesses, const Budget& budget);

}  // namespace tel

#ifndef STRATCALC_UNFOLD_HPP
#define STRATCALC_UNFOLD_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stratcalc/grid.hpp"
#include "stratcalc/morphism.hpp"
#include "stratcalc/report.hpp"
#include "stratcalc/unbend.hpp"

namespace stratcalc {

/// One path from a stratum of the unfolding down to a stratum of X. The word
/// has one letter per step, first step first: '+' / '-' for the copies,
/// 'f' for a tube fiber, '=' for an identity step.
struct SignWord {
  StratumId target;
  std::string word;

  auto operator<=>(const SignWord&) const = default;
  bool operator==(const SignWord&) const = default;
};

/// Composite projection of an iterated unbending.
struct CompositeMap {
  SpacePtr source;
  SpacePtr target;
  std::map<StratumId, std::vector<SignWord>> provenance;

  /// Distinct copy words ending on `s` (paths through copies only).
  std::set<std::string> sign_words(const StratumId& s) const;
};

struct UnfoldResult;
using UnfoldPtr = std::shared_ptr<const UnfoldResult>;

struct UnfoldResult {
  SpacePtr source;
  SpacePtr final;
  CompositeMap composite;
  /// trace[k] unbends X^k into X^(k+1).
  std::vector<UnbendResult> trace;
  /// Unfoldable chart of every singular stratum of X.
  std::vector<ChartSquare> chart_squares;
  /// Unfoldings of the links, by singular stratum.
  std::map<StratumId, UnfoldPtr> link_unfoldings;

  int steps() const noexcept { return static_cast<int>(trace.size()); }
};

struct UnfoldOptions {
  bool reverse_order = false;
};

/// Iterated unbending down to length 0. Throws what unbend_space throws.
UnfoldPtr unfold_space(const SpacePtr& space, const UnfoldOptions& options = {});

/// Walks a sample of the final space down the trace to a sample of X.
LinkSample project_sample(const UnfoldResult& u, const LinkSample& s);

/// ν: the projection of the link's unfolding, tabulated on samples. Steps
/// are walked in `order` (default: last step first).
LinkMap link_projection(const UnfoldResult& link_unfolding, const std::vector<int>& order = {});

/// Square U x L~ x R --c--> U x c(L) with c = ĉ∘ν over the singular stratum `s`.
/// Throws MissingLinkUnfolding when the link unfolding is absent or belongs to another link.
ChartSquare unfoldable_chart(const PresentedSpace& space, const StratumId& s, const UnfoldPtr& link_unfolding);

/// c against ĉ applied after walking the link trace, on every grid point,
/// and the fiber strata reached on both sides.
Report check_unfoldable_square(const PresentedSpace& space, const ChartSquare& square,
                               const UnfoldResult& link_unfolding, const GridSpec& grid = {});

/// Lifts of f at every step; the shorter side is padded with identity unbendings.
struct UnfoldedMorphism {
  std::vector<StratMorphism> steps;
  StratMorphism final;
  std::vector<ParityReport> parity;
};

/// n-fold lift with sign + and n = max of the two lengths (at least `min_steps`).
/// Throws NotLiftable.
UnfoldedMorphism lift_to_unfolding(const StratMorphism& f, const UnfoldResult& from, const UnfoldResult& to,
                                   const GridSpec& grid = {}, int min_steps = 0);

/// Lift squares of every step.
Report check_unfolded_squares(const StratMorphism& f, const UnfoldedMorphism& lifted, const UnfoldResult& from,
                              const UnfoldResult& to, const GridSpec& grid = {});

/// Identity of the final space, carrying the cylinder charts of the last step.
StratMorphism unfolded_identity(const UnfoldResult& u);

struct LawOutcome {
  std::string law;
  std::string subject;
  bool pass = false;
  std::string detail;
};

struct HarnessReport {
  std::vector<LawOutcome> outcomes;
  /// (morphism, reason) pairs kept out of the composition law.
  std::vector<std::pair<std::string, std::string>> excluded;

  bool ok() const;
  std::size_t count(const std::string& law) const;
};

struct HarnessSpace {
  std::string name;
  SpacePtr space;
};

/// Identity law and uniqueness for every space; composition law for every
/// composable pair of Thom-Mather morphisms (also at the first unbending).
HarnessReport functor_harness(const std::vector<HarnessSpace>& spaces, const std::vector<StratMorphism>& morphisms,
                              const GridSpec& grid = {});

}  // namespace stratcalc

#endif  // STRATCALC_UNFOLD_HPP

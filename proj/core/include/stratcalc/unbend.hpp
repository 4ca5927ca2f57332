#ifndef STRATCALC_UNBEND_HPP
#define STRATCALC_UNBEND_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratcalc/expr.hpp"
#include "stratcalc/grid.hpp"
#include "stratcalc/morphism.hpp"
#include "stratcalc/report.hpp"
#include "stratcalc/space.hpp"

namespace stratcalc {

enum class ProvKind { CopyPlus, CopyMinus, TubeFiber, Identity };

std::string_view to_string(ProvKind kind);

/// One piece of a desingularized stratum and where it lies downstairs.
/// For TubeFiber, `target` is the removed minimal stratum S and
/// `link_stratum` the stratum Q of its link (the piece is S x Q x R).
struct ProvTag {
  ProvKind kind = ProvKind::Identity;
  StratumId target;
  std::optional<StratumId> link_stratum;

  bool operator==(const ProvTag&) const = default;
};

/// Which copy of X - Min each half T+/T- of an unbent tube is glued to,
/// and the sign of t on that half.
struct TubeHalf {
  int copy = 1;
  int t_sign = 1;

  bool operator==(const TubeHalf&) const = default;
};

/// Bundle over a removed minimal stratum with fiber L x R.
struct UnbentTube {
  StratumId base;
  SpacePtr link;
  std::vector<ChartRecord> charts;
  CocycleGroup group;
  std::vector<Transition> transitions;
  std::vector<std::array<std::string, 3>> triples;
  /// Link stratum Q -> stratum of the unbent space containing S x Q x R.
  std::map<StratumId, StratumId> fiber;
  std::array<TubeHalf, 2> halves{{{1, 1}, {-1, -1}}};
  /// The signed radium on every chart: t.
  Expr signed_radium = Expr::r();
  int length = 0;
};

/// Chart square  top --c--> bottom  over a singular stratum. For unbendable
/// charts top = U x L x R and c = ĉ; for unfoldable charts top = U x L~ x R and
/// c = ĉ∘ν. `top_strata` sends each stratum of the top link to the stratum of
/// the desingularized space that contains its pieces.
struct ChartSquare {
  StratumId base;
  std::string chart;
  BasicModel top;
  BasicModel bottom;
  BasicMorphism c;
  std::map<StratumId, StratumId> top_strata;
};

/// ĉ(u,l,t) = (u,[l,|t|]) on U x L x R over the cone model `model`.
ChartSquare unbend_chart(const BasicModel& model);

/// Projection of a desingularization, recorded at stratum granularity.
struct DesingMap {
  SpacePtr source;
  SpacePtr target;
  std::map<StratumId, std::vector<ProvTag>> provenance;
  std::vector<ChartSquare> chart_squares;
  bool identity = false;

  /// Image stratum of the regular pieces (copy or identity tags), if any.
  std::optional<StratumId> copy_target(const StratumId& s) const;
  /// Sample of the target lying under a sample of the source, and the copy
  /// sign (+1/-1, 0 for identity maps and fiber pieces).
  std::pair<LinkSample, int> project_sample(const LinkSample& s) const;
};

struct UnbendOptions {
  /// Process minimal strata in decreasing id order.
  bool reverse_order = false;
};

struct UnbendResult {
  SpacePtr unbent;
  DesingMap map;
  std::vector<UnbentTube> tubes;
  std::vector<StratumId> order;
};

/// Global unbending by amalgamation of (X - Min)+, the unbent minimal tubes
/// and (X - Min)-. Length-0 spaces give the identity. The unbent space
/// carries the induced Thom-Mather structure.
/// Throws InvalidInput for invalid spaces and TubesNotSeparated.
UnbendResult unbend_space(const SpacePtr& space, const UnbendOptions& options = {});

/// Tubes of the non-minimal singular strata transported through provenance.
TMStructure induced_tm_on_unbent(const PresentedSpace& space, const UnbendResult& result);

/// Double-cover structure: copy tags {+,-} over every stratum outside Min,
/// fiber pieces over each S in Min in bijection with the strata of its link.
Report check_double_cover(const UnbendResult& result);
/// Tube preservation and |ρ̂| = ρ∘L̂ on every grid point of every unbent tube.
Report check_unbending_is_tm(const UnbendResult& result, const GridSpec& grid = {});
/// Unbendable chart squares commute on the grid.
Report check_chart_squares(const UnbendResult& result, const GridSpec& grid = {});

struct ParityReport {
  bool vertex_ok = false;
  std::string parity;
  bool parity_ok = false;
  bool smooth_ok = false;
  std::string smooth_reason;
  Report report;
};

struct LiftedBasic {
  BasicMorphism map;
  ParityReport parity;
};

/// Even extensions of a1, a2 and sign·sgn(t)·a3(|t|) (zero when a3 vanishes on
/// the grid). When the codomain stays conic the lift is f∘ĉ.
/// Throws VertexObstruction when a3(u,l,0) != 0 somewhere on the grid.
LiftedBasic lift_basic_morphism(const BasicMorphism& f, int sign, const GridSpec& grid = {},
                                bool cylinder_codomain = true);

struct LiftResult {
  StratMorphism lifted;
  std::vector<ParityReport> parity;
};

/// f̂ between the unbent spaces. Throws NotLiftable.
LiftResult lift_morphism(const StratMorphism& f, const UnbendResult& from, const UnbendResult& to,
                         int sign, const GridSpec& grid = {});

/// f∘L̂ = L̂'∘f̂ on strata and on every grid point of the lifted charts.
Report check_lift_square(const StratMorphism& f, const StratMorphism& lifted, const UnbendResult& from,
                         const UnbendResult& to, const GridSpec& grid = {});

/// Identity of the unbent space, including the cylinder charts of the unbent tubes.
StratMorphism unbent_identity(const UnbendResult& result);

/// Exchanges the copies (X - Min)±; t -> -t on the unbent tubes.
StratMorphism deck_swap(const UnbendResult& result);

}  // namespace stratcalc

#endif  // STRATCALC_UNBEND_HPP

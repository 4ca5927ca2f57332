#ifndef STRATCALC_MORPHISM_HPP
#define STRATCALC_MORPHISM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratcalc/expr.hpp"
#include "stratcalc/grid.hpp"
#include "stratcalc/report.hpp"
#include "stratcalc/space.hpp"

namespace stratcalc {

/// U x c(L) with U = R^u_dim, or the unbent cylinder U x L x R when `cylinder` is set.
struct BasicModel {
  int u_dim = 0;
  SpacePtr link;
  bool cylinder = false;
};

bool same_model(const BasicModel& a, const BasicModel& b);

struct ModelPoint {
  std::vector<double> u;
  LinkSample l;
  double r = 0.0;
};

/// Equality in c(L): every point with r = 0 is the vertex, whatever l is.
bool same_cone_point(const ModelPoint& a, const ModelPoint& b, double tol = kTol);
/// Equality in L x R: no collapse.
bool same_cylinder_point(const ModelPoint& a, const ModelPoint& b, double tol = kTol);
bool same_point(const BasicModel& model, const ModelPoint& a, const ModelPoint& b, double tol = kTol);

/// f(u,[l,r]) = (a1(u,l,r), [a2(u,l,r), a3(u,l,r)]).
struct BasicMorphism {
  std::string name;
  BasicModel domain;
  BasicModel codomain;
  std::vector<Expr> a1;
  Expr a2 = Expr::l();
  Expr a3 = Expr::r();
};

/// Every grid point of the model: lattice u, every link sample, radii (r >= 0
/// for cones, the signed heights for cylinders).
std::vector<ModelPoint> model_grid(const BasicModel& model, const GridSpec& grid = {});

/// Throws SampleNotInGrid when the point does not belong to the domain and
/// LinkActionUndefined when a link map is not tabulated there.
ModelPoint eval_basic(const BasicMorphism& f, const ModelPoint& p);

BasicMorphism identity_basic(const BasicModel& model);
/// phi(u,[l,r]) = (u,[g(l),r]).
BasicMorphism cocycle_basic(const BasicModel& model, const LinkMap& g);
/// g∘f by substitution.
BasicMorphism compose(const BasicMorphism& g, const BasicMorphism& f);
/// phi'∘f∘phi^{-1} for the cocycle morphisms of g on the domain and g2 on the codomain.
BasicMorphism conjugate(const BasicMorphism& f, const LinkMap& g, const LinkMap& g2);

/// f(u,[l,0]) does not depend on l, on the grid.
Report check_vertex_consistency(const BasicMorphism& f, const GridSpec& grid = {});

/// The three cocycle equations a1 = a1'(u,gl,r), g'(a1)a2 = a2'(u,gl,r),
/// a3 = a3'(u,gl,r), i.e. phi'∘f = f'∘phi on every grid point.
/// Throws GridMismatch when the four maps do not share models.
bool check_cocycle_square(const BasicMorphism& f, const BasicMorphism& f2, const BasicMorphism& phi,
                          const BasicMorphism& phi2, const GridSpec& grid = {});

/// A basic-model morphism written in the charts `chart` (domain tube over
/// `source`) and `target_chart` (codomain tube over `target`).
struct LocalMorphism {
  StratumId source;
  std::string chart;
  StratumId target;
  std::string target_chart;
  BasicMorphism map;
};

struct MorphismFlags {
  bool stratified = true;
  bool embedding = false;
  bool tube_morphism = false;
  bool thom_mather = false;

  bool operator==(const MorphismFlags&) const = default;
};

struct StratMorphism {
  std::string name;
  SpacePtr domain;
  SpacePtr codomain;
  std::map<StratumId, StratumId> stratum_map;
  /// Conic charts of singular domain strata.
  std::vector<LocalMorphism> locals;
  /// Lifted charts on unbent tubes U x L x R; `source`/`target` name the
  /// removed minimal strata the tubes were built on.
  std::vector<LocalMorphism> cylinder_locals;
  MorphismFlags flags;

  const LocalMorphism* local_at(const StratumId& source) const;
};

/// Never throws; lists every violated condition of the declared flags.
Report validate_morphism(const StratMorphism& f, const GridSpec& grid = {});

StratMorphism identity_morphism(const SpacePtr& space);
/// g∘f. Local charts are matched through the codomain tube transitions.
StratMorphism compose(const StratMorphism& g, const StratMorphism& f);

/// Poset isomorphism preserving dimensions whose locals are injective on the grid.
bool is_isomorphism(const StratMorphism& f);
/// Inverse of an isomorphism whose locals have the form (u,[h(l),r]).
/// Throws NotAnIsomorphism otherwise.
StratMorphism inverse_isomorphism(const StratMorphism& f);

/// Tubes of the domain carried to the codomain: bases and footprints through
/// the stratum map, cocycle groups conjugated by the link maps of f, radium
/// transported as rho' = rho∘f^{-1}. Throws NotAnIsomorphism.
TMStructure pushforward_tubes(const StratMorphism& f, const TMStructure& tm);

/// First difference between two morphisms (stratum maps, chart sets, values on
/// the grid), or nothing when they agree.
std::optional<std::string> morphism_difference(const StratMorphism& a, const StratMorphism& b,
                                               const GridSpec& grid = {}, double tol = kTol);

}  // namespace stratcalc

#endif  // STRATCALC_MORPHISM_HPP

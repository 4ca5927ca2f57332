#ifndef STRATCALC_SPACE_HPP
#define STRATCALC_SPACE_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stratcalc/report.hpp"
#include "stratcalc/stratum.hpp"
#include "stratcalc/tubes.hpp"

namespace stratcalc {

struct SmoothSpec {
  std::string label;
  int dim = 0;
  bool compact = false;

  bool operator==(const SmoothSpec&) const = default;
};

/// Recursive description of a space. `Given` embeds an already presented
/// space as a leaf so that hand-presented links (a suspension, a twisted
/// bundle) can be coned or multiplied.
class StratSpaceExpr {
 public:
  enum class Kind { Smooth, Product, Cone, Disjoint, Suspension, Given };

  static StratSpaceExpr smooth(std::string label, int dim, bool compact);
  static StratSpaceExpr product(SmoothSpec manifold, StratSpaceExpr space);
  static StratSpaceExpr cone(StratSpaceExpr link);
  static StratSpaceExpr disjoint(std::vector<StratSpaceExpr> parts);
  static StratSpaceExpr suspension(StratSpaceExpr base);
  static StratSpaceExpr given(SpacePtr space);

  Kind kind() const noexcept { return kind_; }
  const SmoothSpec& manifold() const { return manifold_; }
  const std::vector<StratSpaceExpr>& args() const { return args_; }
  const SpacePtr& presented() const { return given_; }

  bool operator==(const StratSpaceExpr& other) const;

 private:
  Kind kind_ = Kind::Smooth;
  SmoothSpec manifold_;
  std::vector<StratSpaceExpr> args_;
  SpacePtr given_;
};

/// Normal form of a stratified space: the stratum poset with dimensions, one
/// link per singular stratum, and the Thom-Mather tubes. Immutable.
class PresentedSpace {
 public:
  /// `leq` is stored as given (callers pass a reflexive, transitive relation;
  /// validate_pseudomanifold reports when they did not).
  PresentedSpace(std::vector<Stratum> strata,
                 const std::vector<std::pair<StratumId, StratumId>>& leq,
                 std::map<StratumId, SpacePtr> links,
                 TMStructure tm,
                 bool compact,
                 bool localized = false);

  const std::vector<Stratum>& strata() const noexcept { return strata_; }
  std::size_t size() const noexcept { return strata_.size(); }
  std::optional<std::size_t> index_of(const StratumId& id) const;
  bool contains(const StratumId& id) const { return index_of(id).has_value(); }
  /// Throws UnknownStratum.
  const Stratum& stratum(const StratumId& id) const;

  bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }
  bool leq(const StratumId& a, const StratumId& b) const;
  /// Strict incidence a < b.
  bool lt(const StratumId& a, const StratumId& b) const;
  bool comparable(const StratumId& a, const StratumId& b) const;
  /// All related pairs (a, b) with a <= b, including reflexive ones.
  std::vector<std::pair<StratumId, StratumId>> leq_pairs() const;

  const std::map<StratumId, SpacePtr>& links() const noexcept { return links_; }
  /// Null when `id` has no link.
  SpacePtr link(const StratumId& id) const;
  const TMStructure& tm() const noexcept { return tm_; }
  const Tube* tube(const StratumId& id) const;

  bool compact() const noexcept { return compact_; }
  bool localized() const noexcept { return localized_; }
  int dim() const noexcept { return dim_; }

  std::vector<LinkSample> samples() const;
  std::vector<LinkSample> samples(const StratumId& id) const;

  /// Same space carrying another Thom-Mather structure.
  SpacePtr with_tm(TMStructure tm) const;

 private:
  std::vector<Stratum> strata_;
  std::vector<std::vector<bool>> leq_;
  std::map<StratumId, SpacePtr> links_;
  TMStructure tm_;
  bool compact_ = false;
  bool localized_ = false;
  int dim_ = 0;
};

/// Builds the normal form; every singular stratum receives its canonical tube.
/// Throws ConeOverNonCompact, EmptyDisjoint, InvalidLabel.
SpacePtr present(const StratSpaceExpr& expr, int samples_per_stratum = 8);

/// Suspension of a compact space: poles p+ and p- with link N, body s/<S>.
SpacePtr suspension(const SpacePtr& base);

/// Longest strict chain in the poset.
int length(const PresentedSpace& space);
/// Longest strict chain starting at `id`. Throws UnknownStratum.
int stratum_length(const PresentedSpace& space, const StratumId& id);

struct StrataClasses {
  std::set<StratumId> regular;
  std::set<StratumId> singular;
  std::set<StratumId> minimal;
};
StrataClasses classify_strata(const PresentedSpace& space);

/// Minimal strata that are singular: the part removed by an unbending.
std::set<StratumId> minimal_singular(const PresentedSpace& space);

struct PosetQuery {
  std::set<StratumId> closure;
  std::set<StratumId> incidence_neighborhood;
};
/// Throws UnknownStratum.
PosetQuery poset_query(const PresentedSpace& space, const StratumId& id);

/// Recursive pseudomanifold axioms; never throws.
Report validate_pseudomanifold(const PresentedSpace& space);

/// Restriction to a maximal strict chain. Throws NotAChain.
SpacePtr localize(const PresentedSpace& space, const std::vector<StratumId>& chain);

using StratumBijection = std::map<StratumId, StratumId>;

/// Poset bijection preserving dims, compactness, links (recursively) and tube
/// cocycle groups up to group isomorphism.
std::optional<StratumBijection> iso_check(const PresentedSpace& a, const PresentedSpace& b);

/// Structural equality of two presented spaces (ids, poset, links, tubes).
bool structurally_equal(const PresentedSpace& a, const PresentedSpace& b);

}  // namespace stratcalc

#endif  // STRATCALC_SPACE_HPP

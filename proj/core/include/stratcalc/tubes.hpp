#ifndef STRATCALC_TUBES_HPP
#define STRATCALC_TUBES_HPP

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratcalc/report.hpp"
#include "stratcalc/stratum.hpp"

namespace stratcalc {

class PresentedSpace;
using SpacePtr = std::shared_ptr<const PresentedSpace>;

/// A stratified map between two links, tabulated on their designated samples.
/// Automorphisms of a link (cocycle values, link twists) are LinkMaps from a
/// link to itself; the name is only a handle and takes no part in equality.
struct LinkMap {
  std::string name;
  std::map<StratumId, StratumId> strata;
  std::map<LinkSample, LinkSample> samples;

  /// Throws LinkActionUndefined when `s` is not tabulated.
  LinkSample apply(const LinkSample& s) const;
  bool same_action(const LinkMap& other) const {
    return strata == other.strata && samples == other.samples;
  }
};

/// g∘f. Entries of f whose image is not tabulated by g are dropped.
LinkMap compose(const LinkMap& g, const LinkMap& f, std::string name = {});
LinkMap inverse(const LinkMap& f, std::string name = {});
LinkMap identity_map(const PresentedSpace& link, std::string name = "id");
/// Rotates the samples inside every stratum by `shift` (mod the sample count).
LinkMap rotation_map(const PresentedSpace& link, int shift, std::string name);
/// Checks that `g` is a bijection of `link` preserving poset, dims and sample strata.
Report validate_automorphism(const PresentedSpace& link, const LinkMap& g);

/// Finite structure group of a tube. elements[0] is the identity;
/// table[i][j] is the index of elements[i]∘elements[j], or -1 when the
/// product is not an element.
struct CocycleGroup {
  std::vector<LinkMap> elements;
  std::vector<std::vector<int>> table;

  static CocycleGroup trivial(const PresentedSpace& link);
  /// Builds the table by composing elements and matching actions.
  static CocycleGroup from_elements(std::vector<LinkMap> elements);

  int order() const noexcept { return static_cast<int>(elements.size()); }
  std::optional<int> index_of(const std::string& name) const;
  const LinkMap& element(const std::string& name) const;
  /// Verifies closure, identity, inverses and associativity on the table.
  Report check() const;
};

/// Two finite groups given by tables are isomorphic (brute force up to order 8,
/// element-order profile beyond that).
bool groups_isomorphic(const CocycleGroup& a, const CocycleGroup& b);

enum class ChartKind { PseudomanifoldChart, BundleChart };

struct ChartRecord {
  std::string id;
  StratumId base;
  ChartKind kind = ChartKind::BundleChart;

  bool operator==(const ChartRecord&) const = default;
};

struct Transition {
  std::string from;
  std::string to;
  std::string element;

  bool operator==(const Transition&) const = default;
};

/// Conic fiber bundle T -> S with fiber c(L) over a singular stratum.
/// `fiber` sends each stratum Q of the link to the ambient stratum that
/// contains Q x (0,1) x U; together with the base it is the footprint.
struct Tube {
  StratumId base;
  SpacePtr link;
  std::vector<ChartRecord> charts;
  CocycleGroup group;
  std::vector<Transition> transitions;
  std::vector<std::array<std::string, 3>> triples;
  std::map<StratumId, StratumId> fiber;
  std::optional<int> family;

  std::set<StratumId> footprint() const;
  bool has_chart(const std::string& id) const;
  /// g_{from,to}; identity when from == to; nullptr when the charts do not overlap.
  const LinkMap* transition(const std::string& from, const std::string& to) const;
};

/// Tubes on the singular strata plus the separation bookkeeping.
struct TMStructure {
  std::map<StratumId, Tube> tubes;
  /// Declared nesting T_{k+1} in T_k - S_k for chain-localized spaces.
  bool nesting_ok = false;
  /// Antichains of singular strata whose tubes are taken pairwise disjoint.
  std::vector<std::vector<StratumId>> families;
  std::string justification;
};

/// A point α(u,[l,r]) of a tube, written in the chart `chart`.
struct TubePoint {
  std::string chart;
  std::vector<double> u;
  LinkSample l;
  double r = 0.0;
};

/// Tube of the vertex of Cone(L) or U x Cone(L): one chart, trivial group.
/// Throws NotAConicSpace otherwise.
Tube canonical_tube_for_cone(const PresentedSpace& space);

double radium(const Tube& tube, const TubePoint& x);
TubePoint radial_stretch(const Tube& tube, double lambda, const TubePoint& x);
/// Rewrites `x` in chart `chart` through the transition g_{x.chart,chart}.
TubePoint change_chart(const Tube& tube, const TubePoint& x, const std::string& chart);
/// Same point of T (cone collapse at r = 0, charts related by transitions).
bool same_point(const Tube& tube, const TubePoint& a, const TubePoint& b, double tol = 1e-9);

Report validate_tm(const PresentedSpace& space, const TMStructure& tm);
Report validate_tm(const PresentedSpace& space);

/// Tags every pair of non-comparable singular strata with a common
/// separation family (the maximal antichains of the singular part).
TMStructure separate_tubes(const PresentedSpace& space, const TMStructure& tm);

/// Chart/transition/fiber copy of `tube` with every ambient id passed through `rename`
/// and chart ids prefixed by `chart_prefix`.
template <class Rename>
Tube relabel_tube(const Tube& tube, Rename&& rename, const std::string& chart_prefix) {
  Tube out = tube;
  out.base = rename(tube.base);
  for (auto& c : out.charts) {
    c.id = chart_prefix + c.id;
    c.base = out.base;
  }
  for (auto& t : out.transitions) {
    t.from = chart_prefix + t.from;
    t.to = chart_prefix + t.to;
  }
  for (auto& tr : out.triples) {
    for (auto& c : tr) c = chart_prefix + c;
  }
  out.fiber.clear();
  for (const auto& [q, amb] : tube.fiber) out.fiber.emplace(q, rename(amb));
  out.family.reset();
  return out;
}

}  // namespace stratcalc

#endif  // STRATCALC_TUBES_HPP

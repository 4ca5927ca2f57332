#include "stratcalc/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "stratcalc/error.hpp"
#include "stratcalc/space.hpp"

namespace stratcalc {

// ---------------------------------------------------------------------------
// LinkMap

LinkSample LinkMap::apply(const LinkSample& s) const {
  auto it = samples.find(s);
  if (it == samples.end()) {
    throw Error(ErrorCode::LinkActionUndefined,
                "'" + name + "' is not defined on sample " + to_string(s));
  }
  return it->second;
}

LinkMap compose(const LinkMap& g, const LinkMap& f, std::string name) {
  LinkMap out;
  out.name = name.empty() ? g.name + "*" + f.name : std::move(name);
  for (const auto& [a, b] : f.strata) {
    auto it = g.strata.find(b);
    if (it != g.strata.end()) out.strata.emplace(a, it->second);
  }
  for (const auto& [a, b] : f.samples) {
    auto it = g.samples.find(b);
    if (it != g.samples.end()) out.samples.emplace(a, it->second);
  }
  return out;
}

LinkMap inverse(const LinkMap& f, std::string name) {
  LinkMap out;
  out.name = name.empty() ? f.name + "^-1" : std::move(name);
  for (const auto& [a, b] : f.strata) out.strata.emplace(b, a);
  for (const auto& [a, b] : f.samples) out.samples.emplace(b, a);
  return out;
}

LinkMap identity_map(const PresentedSpace& link, std::string name) {
  LinkMap out;
  out.name = std::move(name);
  for (const auto& s : link.strata()) out.strata.emplace(s.id, s.id);
  for (const auto& s : link.samples()) out.samples.emplace(s, s);
  return out;
}

LinkMap rotation_map(const PresentedSpace& link, int shift, std::string name) {
  LinkMap out;
  out.name = std::move(name);
  for (const auto& s : link.strata()) {
    out.strata.emplace(s.id, s.id);
    for (int i = 0; i < s.samples; ++i) {
      int j = ((i + shift) % s.samples + s.samples) % s.samples;
      out.samples.emplace(LinkSample{s.id, i}, LinkSample{s.id, j});
    }
  }
  return out;
}

Report validate_automorphism(const PresentedSpace& link, const LinkMap& g) {
  Report report;
  std::set<StratumId> images;
  for (const auto& s : link.strata()) {
    auto it = g.strata.find(s.id);
    if (it == g.strata.end() || !link.contains(it->second)) {
      report.add("AutomorphismNotTotal", {s.id}, g.name);
      continue;
    }
    images.insert(it->second);
    if (link.stratum(it->second).dim != s.dim) report.add("AutomorphismChangesDimension", {s.id}, g.name);
  }
  if (!report.ok()) return report;
  if (images.size() != link.size()) report.add("AutomorphismNotBijective", {}, g.name);
  for (const auto& a : link.strata()) {
    for (const auto& b : link.strata()) {
      if (link.leq(a.id, b.id) != link.leq(g.strata.at(a.id), g.strata.at(b.id))) {
        report.add("AutomorphismBreaksIncidence", {a.id, b.id}, g.name);
      }
    }
  }
  std::set<LinkSample> sample_images;
  for (const auto& s : link.samples()) {
    auto it = g.samples.find(s);
    if (it == g.samples.end()) {
      report.add("AutomorphismNotTotal", {s.stratum}, g.name + " on " + to_string(s));
      continue;
    }
    sample_images.insert(it->second);
    if (it->second.stratum != g.strata.at(s.stratum) || !link.contains(it->second.stratum) ||
        it->second.index >= link.stratum(it->second.stratum).samples) {
      report.add("AutomorphismMovesSampleStratum", {s.stratum}, g.name + " on " + to_string(s));
    }
  }
  if (sample_images.size() != link.samples().size()) {
    report.add("AutomorphismNotBijective", {}, g.name + " on samples");
  }
  return report;
}

// ---------------------------------------------------------------------------
// CocycleGroup

CocycleGroup CocycleGroup::trivial(const PresentedSpace& link) {
  return from_elements({identity_map(link, "id")});
}

CocycleGroup CocycleGroup::from_elements(std::vector<LinkMap> elements) {
  CocycleGroup group;
  group.elements = std::move(elements);
  const std::size_t n = group.elements.size();
  group.table.assign(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      LinkMap product = compose(group.elements[i], group.elements[j]);
      for (std::size_t k = 0; k < n; ++k) {
        if (product.same_action(group.elements[k])) {
          group.table[i][j] = static_cast<int>(k);
          break;
        }
      }
    }
  }
  return group;
}

std::optional<int> CocycleGroup::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

const LinkMap& CocycleGroup::element(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw Error(ErrorCode::DanglingId, "no cocycle element named '" + name + "'");
  return elements[*i];
}

Report CocycleGroup::check() const {
  Report report;
  const int n = order();
  if (n == 0) {
    report.add("GroupEmpty");
    return report;
  }
  if (static_cast<int>(table.size()) != n) {
    report.add("GroupTableMalformed");
    return report;
  }
  for (int i = 0; i < n; ++i) {
    if (elements[i].strata.size() != elements[0].strata.size() ||
        elements[i].samples.size() != elements[0].samples.size()) {
      report.add("GroupMixedLinks", {}, elements[i].name);
    }
    std::set<LinkSample> images;
    for (const auto& [_, b] : elements[i].samples) images.insert(b);
    if (images.size() != elements[i].samples.size()) {
      report.add("GroupElementNotBijective", {}, elements[i].name);
    }
    for (int j = 0; j < n; ++j) {
      if (table[i][j] < 0) report.add("GroupNotClosed", {}, elements[i].name + "*" + elements[j].name);
    }
  }
  if (!report.ok()) return report;
  for (int i = 0; i < n; ++i) {
    if (table[0][i] != i || table[i][0] != i) report.add("GroupIdentityMissing", {}, elements[i].name);
    bool has_inverse = false;
    for (int j = 0; j < n; ++j) has_inverse = has_inverse || (table[i][j] == 0 && table[j][i] == 0);
    if (!has_inverse) report.add("GroupMissingInverse", {}, elements[i].name);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (table[table[i][j]][k] != table[i][table[j][k]]) {
          report.add("GroupNotAssociative", {}, elements[i].name);
          return report;
        }
      }
    }
  }
  return report;
}

namespace {

std::vector<int> element_orders(const CocycleGroup& g) {
  std::vector<int> orders;
  for (int i = 0; i < g.order(); ++i) {
    int k = 1;
    int x = i;
    while (x != 0 && k <= g.order()) {
      x = g.table[x][i];
      if (x < 0) break;
      ++k;
    }
    orders.push_back(k);
  }
  std::sort(orders.begin(), orders.end());
  return orders;
}

}  // namespace

bool groups_isomorphic(const CocycleGroup& a, const CocycleGroup& b) {
  if (a.order() != b.order()) return false;
  if (!a.check().ok() || !b.check().ok()) return false;
  if (element_orders(a) != element_orders(b)) return false;
  const int n = a.order();
  if (n > 8) return true;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (perm[0] != 0) continue;
    bool hom = true;
    for (int i = 0; i < n && hom; ++i) {
      for (int j = 0; j < n && hom; ++j) hom = perm[a.table[i][j]] == b.table[perm[i]][perm[j]];
    }
    if (hom) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// ---------------------------------------------------------------------------
// Tube

std::set<StratumId> Tube::footprint() const {
  std::set<StratumId> out{base};
  for (const auto& [_, amb] : fiber) out.insert(amb);
  return out;
}

bool Tube::has_chart(const std::string& id) const {
  return std::any_of(charts.begin(), charts.end(), [&](const ChartRecord& c) { return c.id == id; });
}

const LinkMap* Tube::transition(const std::string& from, const std::string& to) const {
  if (!has_chart(from) || !has_chart(to)) return nullptr;
  if (from == to) return group.elements.empty() ? nullptr : &group.elements.front();
  for (const auto& t : transitions) {
    if (t.from == from && t.to == to) {
      auto i = group.index_of(t.element);
      return i ? &group.elements[*i] : nullptr;
    }
  }
  for (const auto& t : transitions) {
    if (t.from == to && t.to == from) {
      auto i = group.index_of(t.element);
      if (!i) return nullptr;
      for (int j = 0; j < group.order(); ++j) {
        if (group.table[*i][j] == 0) return &group.elements[j];
      }
      return nullptr;
    }
  }
  return nullptr;
}

Tube canonical_tube_for_cone(const PresentedSpace& space) {
  auto minimal = classify_strata(space).minimal;
  if (minimal.size() != 1) throw Error(ErrorCode::NotAConicSpace, "expected a single vertex stratum");
  const StratumId vertex = *minimal.begin();
  auto link = space.link(vertex);
  if (vertex.tokens().empty() || vertex.tokens().back() != "v" || !link) {
    throw Error(ErrorCode::NotAConicSpace, vertex.str() + " is not a cone vertex");
  }
  std::vector<std::string> prefix(vertex.tokens().begin(), vertex.tokens().end() - 1);
  Tube tube;
  tube.base = vertex;
  tube.link = link;
  tube.charts.push_back({vertex.str() + "#0", vertex, ChartKind::BundleChart});
  tube.group = CocycleGroup::trivial(*link);
  for (const auto& q : link->strata()) {
    std::vector<std::string> tokens = prefix;
    tokens.push_back("c");
    tokens.insert(tokens.end(), q.id.tokens().begin(), q.id.tokens().end());
    StratumId amb(std::move(tokens));
    if (!space.contains(amb)) throw Error(ErrorCode::NotAConicSpace, "missing cone body " + amb.str());
    tube.fiber.emplace(q.id, amb);
  }
  if (tube.fiber.size() + 1 != space.size()) {
    throw Error(ErrorCode::NotAConicSpace, "strata outside the cone");
  }
  return tube;
}

namespace {

void require_in_tube(const Tube& tube, const TubePoint& x) {
  if (!tube.has_chart(x.chart)) throw Error(ErrorCode::PointOutsideTube, "unknown chart " + x.chart);
  if (!(x.r >= 0.0)) throw Error(ErrorCode::PointOutsideTube, "negative radium");
  if (tube.link && !tube.link->contains(x.l.stratum)) {
    throw Error(ErrorCode::PointOutsideTube, "sample outside the link: " + to_string(x.l));
  }
}

}  // namespace

double radium(const Tube& tube, const TubePoint& x) {
  require_in_tube(tube, x);
  return x.r;
}

TubePoint radial_stretch(const Tube& tube, double lambda, const TubePoint& x) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::NonPositiveLambda, std::to_string(lambda));
  require_in_tube(tube, x);
  TubePoint out = x;
  out.r = lambda * x.r;
  return out;
}

TubePoint change_chart(const Tube& tube, const TubePoint& x, const std::string& chart) {
  require_in_tube(tube, x);
  const LinkMap* g = tube.transition(x.chart, chart);
  if (!g) throw Error(ErrorCode::PointOutsideTube, "charts " + x.chart + " and " + chart + " do not overlap");
  return {chart, x.u, g->apply(x.l), x.r};
}

bool same_point(const Tube& tube, const TubePoint& a, const TubePoint& b, double tol) {
  TubePoint moved = a;
  if (a.chart != b.chart) {
    if (!tube.transition(a.chart, b.chart)) return false;
    moved = change_chart(tube, a, b.chart);
  }
  if (moved.u.size() != b.u.size()) return false;
  for (std::size_t i = 0; i < b.u.size(); ++i) {
    if (std::abs(moved.u[i] - b.u[i]) > tol) return false;
  }
  if (std::abs(moved.r - b.r) > tol) return false;
  if (std::abs(b.r) <= tol) return true;
  return moved.l == b.l;
}

// ---------------------------------------------------------------------------
// Thom-Mather validation

Report validate_tm(const PresentedSpace& space) {
  return validate_tm(space, space.tm());
}

Report validate_tm(const PresentedSpace& space, const TMStructure& tm) {
  Report report;
  auto cls = classify_strata(space);
  for (const auto& s : cls.singular) {
    if (!tm.tubes.count(s)) report.add("MissingTube", {s});
  }
  for (const auto& [id, tube] : tm.tubes) {
    if (id != tube.base) report.add("TubeBaseMismatch", {id, tube.base});
    if (!space.contains(tube.base)) {
      report.add("UnknownStratum", {tube.base}, "tube base");
      continue;
    }
    if (!cls.singular.count(tube.base)) {
      report.add("TubeOnRegularStratum", {tube.base});
      continue;
    }
    auto link = space.link(tube.base);
    if (!tube.link || !link || (tube.link != link && !structurally_equal(*tube.link, *link))) {
      report.add("TubeLinkMismatch", {tube.base});
      continue;
    }
    if (tube.charts.empty()) report.add("NoCharts", {tube.base});
    for (const auto& c : tube.charts) {
      if (c.base != tube.base) report.add("ChartBaseMismatch", {tube.base}, c.id);
    }
    report.merge(tube.group.check(), "cocycle group of " + tube.base.str());
    for (const auto& g : tube.group.elements) {
      report.merge(validate_automorphism(*link, g), "cocycle group of " + tube.base.str());
    }
    bool transitions_ok = true;
    for (const auto& t : tube.transitions) {
      if (!tube.has_chart(t.from) || !tube.has_chart(t.to)) {
        report.add("UnknownChart", {tube.base}, t.from + "->" + t.to);
        transitions_ok = false;
      }
      if (!tube.group.index_of(t.element)) {
        report.add("UnknownCocycle", {tube.base}, t.element);
        transitions_ok = false;
      }
    }
    if (transitions_ok && tube.group.check().ok()) {
      for (const auto& [a, b, c] : tube.triples) {
        const LinkMap* gab = tube.transition(a, b);
        const LinkMap* gbc = tube.transition(b, c);
        const LinkMap* gac = tube.transition(a, c);
        if (!gab || !gbc || !gac) {
          report.add("CocycleIdentityViolation", {tube.base}, "missing overlap in " + a + "," + b + "," + c);
          continue;
        }
        if (!compose(*gbc, *gab).same_action(*gac)) {
          report.add("CocycleIdentityViolation", {tube.base}, a + "," + b + "," + c);
        }
      }
    }
    // fiber strata and footprint
    std::set<StratumId> above;
    for (const auto& s : space.strata()) {
      if (space.lt(tube.base, s.id)) above.insert(s.id);
    }
    std::set<StratumId> hit;
    for (const auto& [q, amb] : tube.fiber) {
      if (!link->contains(q)) {
        report.add("FiberStrataInvalid", {tube.base}, "link has no stratum " + q.str());
        continue;
      }
      if (!above.count(amb)) {
        report.add("FootprintOutsideNeighborhood", {tube.base, amb});
        continue;
      }
      hit.insert(amb);
      const int expected = space.stratum(tube.base).dim + link->stratum(q).dim + 1;
      if (space.stratum(amb).dim != expected) report.add("FiberDimensionMismatch", {tube.base, amb});
    }
    if (!space.localized()) {
      for (const auto& q : link->strata()) {
        if (!tube.fiber.count(q.id)) report.add("FiberStrataIncomplete", {tube.base}, q.id.str());
      }
    }
    for (const auto& r : above) {
      if (!hit.count(r)) report.add("FootprintMissing", {tube.base, r});
    }
  }

  // Mather incidence: intersecting tubes sit over comparable strata unless separated.
  for (auto a = tm.tubes.begin(); a != tm.tubes.end(); ++a) {
    for (auto b = std::next(a); b != tm.tubes.end(); ++b) {
      if (!space.contains(a->first) || !space.contains(b->first)) continue;
      if (space.comparable(a->first, b->first)) continue;
      auto fa = a->second.footprint();
      auto fb = b->second.footprint();
      bool meet = std::any_of(fa.begin(), fa.end(), [&](const StratumId& s) { return fb.count(s) > 0; });
      if (!meet) continue;
      bool separated = std::any_of(tm.families.begin(), tm.families.end(), [&](const auto& fam) {
        return std::find(fam.begin(), fam.end(), a->first) != fam.end() &&
               std::find(fam.begin(), fam.end(), b->first) != fam.end();
      });
      if (!separated) report.add("MatherViolation", {a->first, b->first});
    }
  }
  for (const auto& fam : tm.families) {
    for (std::size_t i = 0; i < fam.size(); ++i) {
      if (!space.contains(fam[i]) || !cls.singular.count(fam[i])) {
        report.add("FamilyNotAntichain", {fam[i]}, "not a singular stratum");
        continue;
      }
      for (std::size_t j = i + 1; j < fam.size(); ++j) {
        if (space.contains(fam[j]) && space.comparable(fam[i], fam[j])) {
          report.add("FamilyNotAntichain", {fam[i], fam[j]});
        }
      }
    }
  }

  if (space.localized()) {
    std::vector<StratumId> chain;
    for (const auto& s : space.strata()) chain.push_back(s.id);
    std::sort(chain.begin(), chain.end(), [&](const StratumId& x, const StratumId& y) {
      return space.lt(x, y);
    });
    for (std::size_t k = 0; k + 2 < chain.size(); ++k) {
      if (!tm.nesting_ok) {
        report.add("NestingMissing", {chain[k], chain[k + 1]}, "k=" + std::to_string(k));
        continue;
      }
      auto outer = tm.tubes.find(chain[k]);
      auto inner = tm.tubes.find(chain[k + 1]);
      if (outer == tm.tubes.end() || inner == tm.tubes.end()) continue;
      auto fo = outer->second.footprint();
      fo.erase(chain[k]);
      for (const auto& s : inner->second.footprint()) {
        if (!fo.count(s)) report.add("NestingViolated", {chain[k], chain[k + 1]}, "k=" + std::to_string(k));
      }
    }
  }

  for (const auto& [id, link] : space.links()) {
    report.merge(validate_tm(*link), "link(" + id.str() + ")");
  }
  return report;
}

TMStructure separate_tubes(const PresentedSpace& space, const TMStructure& tm) {
  auto singular_set = classify_strata(space).singular;
  std::vector<StratumId> singular(singular_set.begin(), singular_set.end());
  const std::size_t n = singular.size();
  auto apart = [&](std::size_t i, std::size_t j) {
    return i != j && !space.comparable(singular[i], singular[j]);
  };
  // Bron-Kerbosch on the incomparability graph: its maximal cliques are the
  // maximal antichains of the singular part.
  std::vector<std::vector<StratumId>> families;
  std::function<void(std::vector<std::size_t>, std::vector<std::size_t>, std::vector<std::size_t>)>
      expand = [&](std::vector<std::size_t> r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
        if (p.empty() && x.empty()) {
          if (r.size() >= 2) {
            std::vector<StratumId> fam;
            for (auto i : r) fam.push_back(singular[i]);
            std::sort(fam.begin(), fam.end());
            families.push_back(std::move(fam));
          }
          return;
        }
        auto candidates = p;
        for (auto v : candidates) {
          std::vector<std::size_t> p2, x2;
          for (auto w : p) if (apart(v, w)) p2.push_back(w);
          for (auto w : x) if (apart(v, w)) x2.push_back(w);
          auto r2 = r;
          r2.push_back(v);
          expand(std::move(r2), std::move(p2), std::move(x2));
          p.erase(std::find(p.begin(), p.end(), v));
          x.push_back(v);
        }
      };
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  expand({}, all, {});
  std::sort(families.begin(), families.end());

  TMStructure out = tm;
  out.families = families;
  for (auto& [id, tube] : out.tubes) {
    tube.family.reset();
    for (std::size_t f = 0; f < families.size(); ++f) {
      if (std::find(families[f].begin(), families[f].end(), id) != families[f].end()) {
        tube.family = static_cast<int>(f);
        break;
      }
    }
  }
  out.justification = families.empty()
                          ? "no pair of non-comparable singular strata"
                          : "non-comparable singular strata carry pairwise disjoint tubes; "
                            "footprints are kept at stratum granularity";
  return out;
}

}  // namespace stratcalc

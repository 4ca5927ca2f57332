#include "stratcalc/morphism.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "stratcalc/error.hpp"

namespace stratcalc {

namespace {

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  return a && b && structurally_equal(*a, *b);
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace

bool same_model(const BasicModel& a, const BasicModel& b) {
  return a.u_dim == b.u_dim && a.cylinder == b.cylinder && same_space(a.link, b.link);
}

bool same_cone_point(const ModelPoint& a, const ModelPoint& b, double tol) {
  if (!close(a.u, b.u, tol)) return false;
  if (std::abs(a.r) <= tol && std::abs(b.r) <= tol) return true;
  return std::abs(a.r - b.r) <= tol && a.l == b.l;
}

bool same_cylinder_point(const ModelPoint& a, const ModelPoint& b, double tol) {
  return close(a.u, b.u, tol) && std::abs(a.r - b.r) <= tol && a.l == b.l;
}

bool same_point(const BasicModel& model, const ModelPoint& a, const ModelPoint& b, double tol) {
  return model.cylinder ? same_cylinder_point(a, b, tol) : same_cone_point(a, b, tol);
}

std::vector<ModelPoint> model_grid(const BasicModel& model, const GridSpec& grid) {
  if (!model.link) throw Error(ErrorCode::InvalidInput, "basic model without a link");
  std::vector<ModelPoint> out;
  auto radii = model.cylinder ? cylinder_heights(grid) : cone_radii(grid);
  auto samples = model.link->samples();
  for (const auto& u : u_lattice(model.u_dim, grid)) {
    for (const auto& l : samples) {
      for (double r : radii) out.push_back({u, l, r});
    }
  }
  return out;
}

ModelPoint eval_basic(const BasicMorphism& f, const ModelPoint& p) {
  const auto& dom = f.domain;
  if (static_cast<int>(p.u.size()) != dom.u_dim) {
    throw Error(ErrorCode::SampleNotInGrid, "base point has dimension " + std::to_string(p.u.size()) +
                                                ", expected " + std::to_string(dom.u_dim));
  }
  if (!dom.link || !dom.link->contains(p.l.stratum) || p.l.index < 0 ||
      p.l.index >= dom.link->stratum(p.l.stratum).samples) {
    throw Error(ErrorCode::SampleNotInGrid, "not a link sample: " + to_string(p.l));
  }
  if (!dom.cylinder && p.r < 0.0) throw Error(ErrorCode::SampleNotInGrid, "negative cone radius");
  if (static_cast<int>(f.a1.size()) != f.codomain.u_dim) {
    throw Error(ErrorCode::InvalidInput, "a1 has " + std::to_string(f.a1.size()) +
                                             " components for a base of dimension " +
                                             std::to_string(f.codomain.u_dim));
  }
  Env env{p.u, p.l, p.r};
  ModelPoint q;
  for (const auto& c : f.a1) q.u.push_back(c.eval_real(env));
  q.r = f.a3.eval_real(env);
  if (!f.codomain.cylinder && q.r == 0.0) {
    // The vertex: l carries no information, report a fixed representative.
    q.r = 0.0;
    if (f.codomain.link && f.codomain.link->size() > 0) q.l = {f.codomain.link->strata().front().id, 0};
    return q;
  }
  q.l = f.a2.eval_link(env);
  return q;
}

BasicMorphism identity_basic(const BasicModel& model) {
  BasicMorphism f;
  f.name = "id";
  f.domain = model;
  f.codomain = model;
  for (int i = 0; i < model.u_dim; ++i) f.a1.push_back(Expr::u(i));
  return f;
}

BasicMorphism cocycle_basic(const BasicModel& model, const LinkMap& g) {
  BasicMorphism f = identity_basic(model);
  f.name = g.name;
  f.a2 = Expr::apply(g, Expr::l());
  return f;
}

BasicMorphism compose(const BasicMorphism& g, const BasicMorphism& f) {
  Substitution s;
  for (const auto& c : f.a1) s.u.push_back(c);
  s.r = f.a3;
  s.l = f.a2;
  BasicMorphism out;
  out.name = g.name + "*" + f.name;
  out.domain = f.domain;
  out.codomain = g.codomain;
  for (const auto& c : g.a1) out.a1.push_back(simplify(substitute(c, s)));
  out.a2 = simplify(substitute(g.a2, s));
  out.a3 = simplify(substitute(g.a3, s));
  return out;
}

BasicMorphism conjugate(const BasicMorphism& f, const LinkMap& g, const LinkMap& g2) {
  Substitution s;
  s.l = Expr::apply(inverse(g), Expr::l());
  BasicMorphism out;
  out.name = g2.name + "*" + f.name + "*" + g.name + "^-1";
  out.domain = f.domain;
  out.codomain = f.codomain;
  for (const auto& c : f.a1) out.a1.push_back(substitute(c, s));
  out.a2 = Expr::apply(g2, substitute(f.a2, s));
  out.a3 = substitute(f.a3, s);
  return out;
}

Report check_vertex_consistency(const BasicMorphism& f, const GridSpec& grid) {
  Report report;
  if (f.domain.cylinder) return report;
  for (const auto& u : u_lattice(f.domain.u_dim, grid)) {
    std::optional<ModelPoint> first;
    for (const auto& l : f.domain.link->samples()) {
      ModelPoint q = eval_basic(f, {u, l, 0.0});
      if (!first) {
        first = q;
      } else if (!same_point(f.codomain, *first, q)) {
        report.add("VertexInconsistent", {}, f.name + " at " + to_string(l));
        return report;
      }
    }
  }
  return report;
}

bool check_cocycle_square(const BasicMorphism& f, const BasicMorphism& f2, const BasicMorphism& phi,
                          const BasicMorphism& phi2, const GridSpec& grid) {
  if (!same_model(f.domain, f2.domain) || !same_model(f.domain, phi.domain) ||
      !same_model(phi.domain, phi.codomain) || !same_model(f.codomain, f2.codomain) ||
      !same_model(f.codomain, phi2.domain) || !same_model(phi2.domain, phi2.codomain)) {
    throw Error(ErrorCode::GridMismatch, "cocycle square over different basic models");
  }
  try {
    for (const auto& p : model_grid(f.domain, grid)) {
      ModelPoint lhs = eval_basic(phi2, eval_basic(f, p));
      ModelPoint rhs = eval_basic(f2, eval_basic(phi, p));
      if (!same_point(f.codomain, lhs, rhs)) return false;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LinkActionUndefined) return false;
    throw;
  }
  return true;
}

const LocalMorphism* StratMorphism::local_at(const StratumId& source) const {
  for (const auto& l : locals) {
    if (l.source == source) return &l;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// validation

namespace {

struct Collector {
  Report& report;
  std::set<std::string> seen;

  void once(const std::string& code, std::vector<StratumId> strata, const std::string& detail) {
    if (seen.insert(code).second) report.add(code, std::move(strata), detail);
  }
};

std::tuple<long long, long long, long long, std::string> point_key(const BasicModel& model,
                                                                   const ModelPoint& p) {
  auto q = [](double x) { return static_cast<long long>(std::llround(x * 1e6)); };
  long long h = 0;
  for (double x : p.u) h = h * 1000003 + q(x);
  if (!model.cylinder && std::abs(p.r) <= kTol) return {h, 0, 0, "vertex"};
  return {h, q(p.r), p.l.index, p.l.stratum.str()};
}

Report check_local(const StratMorphism& f, const LocalMorphism& local, const Tube& tube,
                   const Tube& tube2, const GridSpec& grid) {
  Report report;
  Collector c{report, {}};
  const auto& Y = *f.codomain;
  const auto& map = local.map;
  auto link2 = Y.link(local.target);
  std::set<std::tuple<long long, long long, long long, std::string>> in_keys, out_keys;
  for (const auto& p : model_grid(map.domain, grid)) {
    ModelPoint q;
    try {
      q = eval_basic(map, p);
    } catch (const Error& e) {
      c.once(std::string(to_string(e.code())), {local.source}, e.detail());
      continue;
    }
    if (q.r < -kTol) {
      c.once("NegativeRadius", {local.source}, to_string(p.l));
      continue;
    }
    const bool at_vertex = q.r <= kTol;
    if (!at_vertex && (!link2->contains(q.l.stratum) || q.l.index < 0 ||
                       q.l.index >= link2->stratum(q.l.stratum).samples)) {
      c.once("LinkOutOfRange", {local.source}, to_string(q.l));
      continue;
    }
    std::optional<StratumId> src;
    if (p.r == 0.0) {
      src = local.source;
    } else if (auto it = tube.fiber.find(p.l.stratum); it != tube.fiber.end()) {
      src = it->second;
    }
    std::optional<StratumId> img;
    if (at_vertex) {
      img = local.target;
    } else if (auto it = tube2.fiber.find(q.l.stratum); it != tube2.fiber.end()) {
      img = it->second;
    }
    if (src && img && f.stratum_map.at(*src) != *img) {
      c.once("StratumMismatch", {*src, *img}, "chart " + local.chart + " at " + to_string(p.l));
    }
    if (f.flags.tube_morphism || f.flags.thom_mather) {
      if (std::abs(q.r - p.r) > kTol) {
        c.once("RadiumNotPreserved", {local.source}, "r=" + std::to_string(p.r) + " -> " + std::to_string(q.r));
      }
      ModelPoint base = eval_basic(map, {p.u, p.l, 0.0});
      if (!close(base.u, q.u, kTol)) {
        c.once("BundleProjectionNotPreserved", {local.source}, to_string(p.l));
      }
    }
    if (f.flags.embedding) {
      in_keys.insert(point_key(map.domain, p));
      out_keys.insert(point_key(map.codomain, q));
    }
  }
  if (f.flags.embedding && out_keys.size() != in_keys.size()) {
    report.add("LocalNotInvertible", {local.source}, local.chart);
  }
  report.merge(check_vertex_consistency(map, grid));
  return report;
}

}  // namespace

Report validate_morphism(const StratMorphism& f, const GridSpec& grid) {
  Report report;
  if (!f.domain || !f.codomain) {
    report.add("MissingSpace", {}, f.name);
    return report;
  }
  const auto& X = *f.domain;
  const auto& Y = *f.codomain;
  for (const auto& s : X.strata()) {
    auto it = f.stratum_map.find(s.id);
    if (it == f.stratum_map.end()) {
      report.add("StratumMapIncomplete", {s.id});
    } else if (!Y.contains(it->second)) {
      report.add("UnknownStratum", {s.id, it->second});
    }
  }
  for (const auto& [a, _] : f.stratum_map) {
    if (!X.contains(a)) report.add("UnknownStratum", {a}, "not a domain stratum");
  }
  if (!report.ok()) return report;

  for (const auto& [a, b] : X.leq_pairs()) {
    if (!Y.leq(f.stratum_map.at(a), f.stratum_map.at(b))) report.add("NotMonotone", {a, b});
  }
  if (f.flags.embedding) {
    std::set<StratumId> images;
    for (const auto& [_, b] : f.stratum_map) images.insert(b);
    if (images.size() != f.stratum_map.size()) report.add("NotInjective");
  }

  auto singular = classify_strata(X).singular;
  for (const auto& local : f.locals) {
    if (!singular.count(local.source)) {
      report.add("UnknownChart", {local.source}, "local on a stratum without tube");
      continue;
    }
    if (f.stratum_map.at(local.source) != local.target) {
      report.add("StratumMismatch", {local.source, local.target}, "local chart target");
      continue;
    }
    const Tube* tube = X.tube(local.source);
    const Tube* tube2 = Y.tube(local.target);
    if (!tube || !tube->has_chart(local.chart) || !tube2 || !tube2->has_chart(local.target_chart)) {
      report.add("UnknownChart", {local.source, local.target}, local.chart + " -> " + local.target_chart);
      continue;
    }
    BasicModel dom{X.stratum(local.source).dim, X.link(local.source), false};
    BasicModel cod{Y.stratum(local.target).dim, Y.link(local.target), false};
    if (!same_model(dom, local.map.domain) || !same_model(cod, local.map.codomain)) {
      report.add("ChartMismatch", {local.source}, local.chart);
      continue;
    }
    report.merge(check_local(f, local, *tube, *tube2, grid), "local " + local.chart);
  }

  if (f.flags.tube_morphism || f.flags.thom_mather) {
    for (const auto& s : singular) {
      if (!f.local_at(s)) report.add("MissingLocal", {s});
    }
  }
  if (f.flags.thom_mather) {
    for (const auto& s : singular) {
      const Tube* tube = X.tube(s);
      if (!tube) continue;
      const StratumId& s2 = f.stratum_map.at(s);
      const Tube* tube2 = Y.tube(s2);
      if (!tube2) {
        report.add("TubeNotPreserved", {s, s2}, "image stratum has no tube");
        continue;
      }
      auto target = tube2->footprint();
      for (const auto& r : tube->footprint()) {
        if (!target.count(f.stratum_map.at(r))) report.add("TubeNotPreserved", {s, r});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// construction

StratMorphism identity_morphism(const SpacePtr& space) {
  StratMorphism f;
  f.name = "id";
  f.domain = space;
  f.codomain = space;
  for (const auto& s : space->strata()) f.stratum_map.emplace(s.id, s.id);
  for (const auto& [id, tube] : space->tm().tubes) {
    BasicModel model{space->stratum(id).dim, space->link(id), false};
    for (const auto& chart : tube.charts) {
      f.locals.push_back({id, chart.id, id, chart.id, identity_basic(model)});
    }
  }
  f.flags = {true, true, true, true};
  return f;
}

namespace {

std::optional<BasicMorphism> through_transition(const BasicMorphism& m, const Tube* tube,
                                                const std::string& from, const std::string& to) {
  if (from == to) return m;
  if (!tube) return std::nullopt;
  const LinkMap* g = tube->transition(from, to);
  if (!g) return std::nullopt;
  BasicMorphism out = m;
  out.a2 = Expr::apply(*g, m.a2);
  return out;
}

template <class Range>
const LocalMorphism* match(const Range& locals, const StratumId& source, const std::string& chart) {
  const LocalMorphism* any = nullptr;
  for (const auto& l : locals) {
    if (l.source != source) continue;
    if (l.chart == chart) return &l;
    if (!any) any = &l;
  }
  return any;
}

}  // namespace

StratMorphism compose(const StratMorphism& g, const StratMorphism& f) {
  if (!same_space(f.codomain, g.domain)) {
    throw Error(ErrorCode::InvalidInput, "cannot compose " + g.name + " after " + f.name);
  }
  StratMorphism out;
  out.name = g.name + "*" + f.name;
  out.domain = f.domain;
  out.codomain = g.codomain;
  for (const auto& [a, b] : f.stratum_map) {
    auto it = g.stratum_map.find(b);
    if (it != g.stratum_map.end()) out.stratum_map.emplace(a, it->second);
  }
  for (const auto& lf : f.locals) {
    const LocalMorphism* lg = match(g.locals, lf.target, lf.target_chart);
    if (!lg) continue;
    auto mid = through_transition(lf.map, f.codomain->tube(lf.target), lf.target_chart, lg->chart);
    if (!mid) continue;
    out.locals.push_back({lf.source, lf.chart, lg->target, lg->target_chart, compose(lg->map, *mid)});
  }
  for (const auto& lf : f.cylinder_locals) {
    const LocalMorphism* lg = match(g.cylinder_locals, lf.target, lf.target_chart);
    if (!lg || lg->chart != lf.target_chart) continue;
    out.cylinder_locals.push_back(
        {lf.source, lf.chart, lg->target, lg->target_chart, compose(lg->map, lf.map)});
  }
  out.flags.stratified = f.flags.stratified && g.flags.stratified;
  out.flags.embedding = f.flags.embedding && g.flags.embedding;
  out.flags.tube_morphism = f.flags.tube_morphism && g.flags.tube_morphism;
  out.flags.thom_mather = f.flags.thom_mather && g.flags.thom_mather;
  return out;
}

bool is_isomorphism(const StratMorphism& f) {
  if (!f.domain || !f.codomain || f.domain->size() != f.codomain->size()) return false;
  std::set<StratumId> images;
  for (const auto& s : f.domain->strata()) {
    auto it = f.stratum_map.find(s.id);
    if (it == f.stratum_map.end() || !f.codomain->contains(it->second)) return false;
    if (f.codomain->stratum(it->second).dim != s.dim) return false;
    images.insert(it->second);
  }
  if (images.size() != f.domain->size()) return false;
  for (const auto& a : f.domain->strata()) {
    for (const auto& b : f.domain->strata()) {
      if (f.domain->leq(a.id, b.id) != f.codomain->leq(f.stratum_map.at(a.id), f.stratum_map.at(b.id))) {
        return false;
      }
    }
  }
  for (const auto& local : f.locals) {
    std::set<std::tuple<long long, long long, long long, std::string>> in_keys, out_keys;
    for (const auto& p : model_grid(local.map.domain)) {
      in_keys.insert(point_key(local.map.domain, p));
      out_keys.insert(point_key(local.map.codomain, eval_basic(local.map, p)));
    }
    if (in_keys.size() != out_keys.size()) return false;
  }
  return true;
}

namespace {

/// h when the local is (u, [h(l), r]) (h = nullopt means the identity on l).
std::optional<std::optional<LinkMap>> link_action_of(const BasicMorphism& m) {
  if (m.a1.size() != static_cast<std::size_t>(m.domain.u_dim)) return std::nullopt;
  for (int i = 0; i < m.domain.u_dim; ++i) {
    if (!(m.a1[i] == Expr::u(i))) return std::nullopt;
  }
  if (!(m.a3 == Expr::r())) return std::nullopt;
  if (m.a2 == Expr::l()) return std::optional<LinkMap>{};
  if (m.a2.op() == Expr::Op::Apply && m.a2.args()[0] == Expr::l()) {
    return std::optional<LinkMap>{m.a2.map()};
  }
  return std::nullopt;
}

}  // namespace

StratMorphism inverse_isomorphism(const StratMorphism& f) {
  if (!is_isomorphism(f)) throw Error(ErrorCode::NotAnIsomorphism, f.name);
  StratMorphism out;
  out.name = f.name + "^-1";
  out.domain = f.codomain;
  out.codomain = f.domain;
  for (const auto& [a, b] : f.stratum_map) out.stratum_map.emplace(b, a);
  for (const auto& l : f.locals) {
    auto h = link_action_of(l.map);
    if (!h) throw Error(ErrorCode::NotAnIsomorphism, "local " + l.chart + " is not a link action");
    BasicMorphism m = identity_basic(l.map.codomain);
    m.codomain = l.map.domain;
    m.name = l.map.name + "^-1";
    if (*h) m.a2 = Expr::apply(inverse(**h), Expr::l());
    out.locals.push_back({l.target, l.target_chart, l.source, l.chart, m});
  }
  out.flags = f.flags;
  return out;
}

namespace {

LinkMap link_transport(const StratMorphism& f, const StratumId& s, const SpacePtr& from,
                       const SpacePtr& to) {
  if (const LocalMorphism* local = f.local_at(s)) {
    if (auto h = link_action_of(local->map)) {
      if (!*h) return identity_map(*from, "id");
      return **h;
    }
  }
  if (same_space(from, to)) return identity_map(*from, "id");
  auto iso = iso_check(*from, *to);
  if (!iso) throw Error(ErrorCode::NotAnIsomorphism, "links of " + s.str() + " differ");
  LinkMap h;
  h.name = "iso";
  h.strata = *iso;
  for (const auto& sample : from->samples()) {
    LinkSample image{iso->at(sample.stratum), sample.index};
    if (image.index >= to->stratum(image.stratum).samples) {
      throw Error(ErrorCode::NotAnIsomorphism, "sample counts of " + s.str() + " differ");
    }
    h.samples.emplace(sample, image);
  }
  return h;
}

}  // namespace

TMStructure pushforward_tubes(const StratMorphism& f, const TMStructure& tm) {
  if (!is_isomorphism(f)) throw Error(ErrorCode::NotAnIsomorphism, f.name);
  const auto& Y = *f.codomain;
  TMStructure out;
  out.nesting_ok = tm.nesting_ok;
  out.justification = tm.justification;
  for (const auto& fam : tm.families) {
    std::vector<StratumId> mapped;
    for (const auto& s : fam) mapped.push_back(f.stratum_map.at(s));
    std::sort(mapped.begin(), mapped.end());
    out.families.push_back(std::move(mapped));
  }
  std::sort(out.families.begin(), out.families.end());
  for (const auto& [s, tube] : tm.tubes) {
    const StratumId& s2 = f.stratum_map.at(s);
    auto link2 = Y.link(s2);
    if (!link2) throw Error(ErrorCode::NotAnIsomorphism, s2.str() + " has no link");
    LinkMap h = link_transport(f, s, tube.link, link2);
    LinkMap h_inv = inverse(h);
    Tube t;
    t.base = s2;
    t.link = link2;
    t.charts = tube.charts;
    for (auto& c : t.charts) c.base = s2;
    std::vector<LinkMap> elements;
    for (const auto& g : tube.group.elements) elements.push_back(compose(h, compose(g, h_inv), g.name));
    t.group = CocycleGroup::from_elements(std::move(elements));
    t.transitions = tube.transitions;
    t.triples = tube.triples;
    for (const auto& [q, amb] : tube.fiber) t.fiber.emplace(h.strata.at(q), f.stratum_map.at(amb));
    out.tubes.emplace(s2, std::move(t));
  }
  for (auto& [id, tube] : out.tubes) {
    for (std::size_t i = 0; i < out.families.size(); ++i) {
      const auto& fam = out.families[i];
      if (std::find(fam.begin(), fam.end(), id) != fam.end()) {
        tube.family = static_cast<int>(i);
        break;
      }
    }
  }
  return out;
}

std::optional<std::string> morphism_difference(const StratMorphism& a, const StratMorphism& b,
                                               const GridSpec& grid, double tol) {
  if (!same_space(a.domain, b.domain)) return "domains differ";
  if (!same_space(a.codomain, b.codomain)) return "codomains differ";
  if (a.stratum_map != b.stratum_map) return "stratum maps differ";
  auto compare = [&](const std::vector<LocalMorphism>& la,
                     const std::vector<LocalMorphism>& lb) -> std::optional<std::string> {
    if (la.size() != lb.size()) return "chart sets differ";
    for (const auto& x : la) {
      auto it = std::find_if(lb.begin(), lb.end(), [&](const LocalMorphism& y) {
        return y.source == x.source && y.chart == x.chart;
      });
      if (it == lb.end()) return "no counterpart for chart " + x.chart;
      if (it->target != x.target || it->target_chart != x.target_chart) {
        return "chart " + x.chart + " lands in different charts";
      }
      for (const auto& p : model_grid(x.map.domain, grid)) {
        ModelPoint qa = eval_basic(x.map, p);
        ModelPoint qb = eval_basic(it->map, p);
        if (!same_point(x.map.codomain, qa, qb, tol)) {
          return "chart " + x.chart + " differs at " + to_string(p.l) + ", r=" + std::to_string(p.r);
        }
      }
    }
    return std::nullopt;
  };
  if (auto d = compare(a.locals, b.locals)) return d;
  return compare(a.cylinder_locals, b.cylinder_locals);
}

}  // namespace stratcalc

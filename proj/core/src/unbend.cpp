#include "stratcalc/unbend.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stratcalc/error.hpp"

namespace stratcalc {

std::string_view to_string(ProvKind kind) {
  switch (kind) {
    case ProvKind::CopyPlus: return "copy+";
    case ProvKind::CopyMinus: return "copy-";
    case ProvKind::TubeFiber: return "tube-fiber";
    case ProvKind::Identity: return "identity";
  }
  return "?";
}

ChartSquare unbend_chart(const BasicModel& model) {
  if (model.cylinder) throw Error(ErrorCode::InvalidInput, "unbend_chart expects a cone model");
  ChartSquare sq;
  sq.bottom = model;
  sq.top = model;
  sq.top.cylinder = true;
  sq.c = identity_basic(model);
  sq.c.name = "c^";
  sq.c.domain = sq.top;
  sq.c.codomain = sq.bottom;
  sq.c.a3 = Expr::abs(Expr::r());
  return sq;
}

// ---------------------------------------------------------------------------
// DesingMap

namespace {

int copy_sign(ProvKind k) {
  return k == ProvKind::CopyPlus ? 1 : (k == ProvKind::CopyMinus ? -1 : 0);
}

const std::vector<ProvTag>& tags_of(const DesingMap& m, const StratumId& s) {
  static const std::vector<ProvTag> none;
  auto it = m.provenance.find(s);
  return it == m.provenance.end() ? none : it->second;
}

/// Downstairs stratum of a piece: its copy/identity target, else the base of its fiber.
std::optional<StratumId> down(const DesingMap& m, const StratumId& s) {
  if (auto t = m.copy_target(s)) return t;
  for (const auto& tag : tags_of(m, s)) {
    if (tag.kind == ProvKind::TubeFiber) return tag.target;
  }
  return std::nullopt;
}

bool has_fiber_tag(const DesingMap& m, const StratumId& s, const StratumId& base,
                   const std::optional<StratumId>& q = std::nullopt) {
  for (const auto& tag : tags_of(m, s)) {
    if (tag.kind == ProvKind::TubeFiber && tag.target == base && (!q || tag.link_stratum == q)) return true;
  }
  return false;
}

}  // namespace

std::optional<StratumId> DesingMap::copy_target(const StratumId& s) const {
  for (const auto& tag : tags_of(*this, s)) {
    if (tag.kind != ProvKind::TubeFiber) return tag.target;
  }
  return std::nullopt;
}

std::pair<LinkSample, int> DesingMap::project_sample(const LinkSample& s) const {
  const auto& tags = tags_of(*this, s.stratum);
  if (tags.empty()) throw Error(ErrorCode::DanglingId, "no provenance for " + s.stratum.str());
  std::set<int> copies;
  std::optional<StratumId> target;
  for (const auto& tag : tags) {
    if (tag.kind == ProvKind::TubeFiber) continue;
    target = tag.target;
    copies.insert(copy_sign(tag.kind));
  }
  if (!target) {
    const StratumId& base = tags.front().target;
    return {{base, s.index % this->target->stratum(base).samples}, 0};
  }
  const int n = this->target->stratum(*target).samples;
  if (copies.size() == 2) {
    return s.index < n ? std::pair{LinkSample{*target, s.index}, 1}
                       : std::pair{LinkSample{*target, s.index - n}, -1};
  }
  return {{*target, s.index % n}, *copies.begin()};
}

// ---------------------------------------------------------------------------
// unbend_space

namespace {

struct Piece {
  bool fiber = false;
  StratumId stratum;  // R for copies, S for fiber pieces
  int sign = 0;
  StratumId q;
};

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

StratumId with_prefix(const std::string& token, const StratumId& id) { return id.prefixed(token); }

StratumId fiber_piece_id(const StratumId& s, const StratumId& q) {
  std::vector<std::string> tokens{"uf"};
  tokens.insert(tokens.end(), s.tokens().begin(), s.tokens().end());
  tokens.push_back("@");
  tokens.insert(tokens.end(), q.tokens().begin(), q.tokens().end());
  return StratumId(std::move(tokens));
}

UnbendResult identity_unbending(const SpacePtr& space) {
  UnbendResult out;
  out.unbent = space;
  out.map.source = space;
  out.map.target = space;
  out.map.identity = true;
  for (const auto& s : space->strata()) out.map.provenance[s.id] = {{ProvKind::Identity, s.id, {}}};
  return out;
}

}  // namespace

UnbendResult unbend_space(const SpacePtr& space, const UnbendOptions& options) {
  if (!space) throw Error(ErrorCode::InvalidInput, "no space");
  if (auto r = validate_pseudomanifold(*space); !r.ok()) {
    throw Error(ErrorCode::InvalidInput, "not a pseudomanifold: " + r.violations.front().code);
  }
  if (length(*space) == 0) return identity_unbending(space);
  if (auto r = validate_tm(*space); !r.ok()) {
    throw Error(ErrorCode::InvalidInput, "not a Thom-Mather structure: " + r.violations.front().code);
  }
  const auto& X = *space;
  const auto& tm = X.tm();
  auto min_set = minimal_singular(X);
  std::vector<StratumId> order(min_set.begin(), min_set.end());
  if (options.reverse_order) std::reverse(order.begin(), order.end());

  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      auto fa = tm.tubes.at(order[i]).footprint();
      auto fb = tm.tubes.at(order[j]).footprint();
      bool meet = std::any_of(fa.begin(), fa.end(), [&](const StratumId& s) { return fb.count(s) > 0; });
      if (!meet) continue;
      bool tagged = std::any_of(tm.families.begin(), tm.families.end(), [&](const auto& fam) {
        return std::find(fam.begin(), fam.end(), order[i]) != fam.end() &&
               std::find(fam.begin(), fam.end(), order[j]) != fam.end();
      });
      if (!tagged) throw Error(ErrorCode::TubesNotSeparated, order[i].str() + ", " + order[j].str());
    }
  }

  // Pieces: both copies of every stratum outside Min, then the fibers S x Q x R.
  std::vector<Piece> pieces;
  std::map<std::pair<StratumId, int>, std::size_t> copy_index;
  for (const auto& s : X.strata()) {
    if (min_set.count(s.id)) continue;
    for (int sign : {1, -1}) {
      copy_index[{s.id, sign}] = pieces.size();
      pieces.push_back({false, s.id, sign, {}});
    }
  }
  std::map<std::pair<StratumId, StratumId>, std::size_t> fiber_index;
  for (const auto& s : order) {
    for (const auto& q : X.link(s)->strata()) {
      fiber_index[{s, q.id}] = pieces.size();
      pieces.push_back({true, s, 0, q.id});
    }
  }
  // Amalgamation: each fiber piece is glued to both copies of the stratum it
  // sweeps out away from t = 0.
  UnionFind uf(pieces.size());
  for (const auto& s : order) {
    const Tube& tube = tm.tubes.at(s);
    for (const auto& q : X.link(s)->strata()) {
      auto it = tube.fiber.find(q.id);
      if (it == tube.fiber.end()) continue;
      std::size_t f = fiber_index.at({s, q.id});
      uf.unite(f, copy_index.at({it->second, 1}));
      uf.unite(f, copy_index.at({it->second, -1}));
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < pieces.size(); ++i) classes[uf.find(i)].push_back(i);

  UnbendResult out;
  out.order = order;
  std::map<std::size_t, StratumId> class_id;
  std::vector<Stratum> strata;
  std::map<StratumId, SpacePtr> links;
  for (const auto& [root, members] : classes) {
    std::optional<StratumId> r;
    std::set<int> signs;
    std::vector<ProvTag> tags;
    for (auto i : members) {
      const Piece& p = pieces[i];
      if (p.fiber) {
        tags.push_back({ProvKind::TubeFiber, p.stratum, p.q});
      } else {
        r = p.stratum;
        signs.insert(p.sign);
        tags.push_back({p.sign > 0 ? ProvKind::CopyPlus : ProvKind::CopyMinus, p.stratum, {}});
      }
    }
    std::sort(tags.begin(), tags.end(), [](const ProvTag& a, const ProvTag& b) {
      return std::tie(a.kind, a.target, a.link_stratum) < std::tie(b.kind, b.target, b.link_stratum);
    });
    Stratum st;
    if (r) {
      const Stratum& base = X.stratum(*r);
      st.dim = base.dim;
      st.label = base.label;
      if (signs.size() == 2) {
        st.id = with_prefix("ub", *r);
        st.samples = 2 * base.samples;
      } else {
        st.id = with_prefix(*signs.begin() > 0 ? "cp+" : "cp-", *r);
        st.samples = base.samples;
      }
      if (auto link = X.link(*r)) links.emplace(st.id, link);
    } else {
      const Piece& p = pieces[members.front()];
      auto link = X.link(p.stratum);
      const Stratum& q = link->stratum(p.q);
      st.id = fiber_piece_id(p.stratum, p.q);
      st.dim = X.stratum(p.stratum).dim + q.dim + 1;
      st.label = q.label;
      st.samples = q.samples;
      if (auto ql = link->link(p.q)) links.emplace(st.id, ql);
    }
    class_id[root] = st.id;
    out.map.provenance[st.id] = std::move(tags);
    strata.push_back(std::move(st));
  }

  auto id_of_copy = [&](const StratumId& r, int sign) { return class_id.at(uf.find(copy_index.at({r, sign}))); };
  auto id_of_fiber = [&](const StratumId& s, const StratumId& q) {
    return class_id.at(uf.find(fiber_index.at({s, q})));
  };

  // Incidence: copies follow X; loose fiber pieces follow their link and the
  // strata their link strata sweep into.
  std::set<std::pair<StratumId, StratumId>> leq;
  for (const auto& [a, b] : X.leq_pairs()) {
    if (min_set.count(a) || min_set.count(b)) continue;
    for (int sign : {1, -1}) leq.emplace(id_of_copy(a, sign), id_of_copy(b, sign));
  }
  for (const auto& s : order) {
    const Tube& tube = tm.tubes.at(s);
    auto link = X.link(s);
    for (const auto& q : link->strata()) {
      if (tube.fiber.count(q.id)) continue;
      StratumId f = id_of_fiber(s, q.id);
      for (const auto& q2 : link->strata()) {
        if (!link->leq(q.id, q2.id)) continue;
        auto it = tube.fiber.find(q2.id);
        if (it == tube.fiber.end()) {
          leq.emplace(f, id_of_fiber(s, q2.id));
          continue;
        }
        for (const auto& r : X.strata()) {
          if (!min_set.count(r.id) && X.leq(it->second, r.id)) {
            for (int sign : {1, -1}) leq.emplace(f, id_of_copy(r.id, sign));
          }
        }
      }
    }
  }

  for (const auto& s : order) {
    const Tube& tube = tm.tubes.at(s);
    UnbentTube ut;
    ut.base = s;
    ut.link = tube.link;
    ut.charts = tube.charts;
    ut.group = tube.group;
    ut.transitions = tube.transitions;
    ut.triples = tube.triples;
    for (const auto& q : tube.link->strata()) ut.fiber.emplace(q.id, id_of_fiber(s, q.id));
    ut.length = length(*tube.link);
    BasicModel model{X.stratum(s).dim, tube.link, false};
    ChartSquare sq = unbend_chart(model);
    sq.base = s;
    sq.chart = tube.charts.front().id;
    sq.top_strata = ut.fiber;
    out.map.chart_squares.push_back(std::move(sq));
    out.tubes.push_back(std::move(ut));
  }

  auto bare = std::make_shared<PresentedSpace>(
      std::move(strata), std::vector<std::pair<StratumId, StratumId>>(leq.begin(), leq.end()),
      std::move(links), TMStructure{}, X.compact());
  out.map.source = bare;
  out.map.target = space;
  TMStructure induced = induced_tm_on_unbent(X, out);
  out.unbent = bare->with_tm(separate_tubes(*bare, induced));
  out.map.source = out.unbent;
  return out;
}

TMStructure induced_tm_on_unbent(const PresentedSpace& space, const UnbendResult& result) {
  TMStructure out;
  out.nesting_ok = space.tm().nesting_ok;
  if (result.map.identity) return space.tm();
  std::map<StratumId, StratumId> up;  // stratum outside Min -> its (+) preimage
  for (const auto& [id, tags] : result.map.provenance) {
    for (const auto& tag : tags) {
      if (tag.kind == ProvKind::CopyPlus) up[tag.target] = id;
    }
  }
  for (const auto& [s, tube] : space.tm().tubes) {
    auto it = up.find(s);
    if (it == up.end()) continue;  // removed minimal stratum
    auto rename = [&](const StratumId& id) { return up.at(id); };
    out.tubes.emplace(it->second, relabel_tube(tube, rename, ""));
  }
  return out;
}

// ---------------------------------------------------------------------------
// checks

Report check_double_cover(const UnbendResult& result) {
  Report report;
  const auto& m = result.map;
  if (m.identity) return report;
  const auto& X = *m.target;
  std::set<StratumId> removed(result.order.begin(), result.order.end());
  std::map<StratumId, std::multiset<int>> copies;
  std::map<StratumId, std::multiset<StratumId>> fibers;
  for (const auto& [_, tags] : m.provenance) {
    for (const auto& tag : tags) {
      if (tag.kind == ProvKind::TubeFiber) {
        fibers[tag.target].insert(tag.link_stratum.value_or(StratumId{}));
      } else {
        copies[tag.target].insert(copy_sign(tag.kind));
      }
    }
  }
  for (const auto& s : X.strata()) {
    if (removed.count(s.id)) {
      if (copies.count(s.id)) report.add("DoubleCoverBroken", {s.id}, "removed stratum has a copy");
      std::multiset<StratumId> expected;
      for (const auto& q : X.link(s.id)->strata()) expected.insert(q.id);
      if (fibers[s.id] != expected) report.add("FiberPreimageMismatch", {s.id});
    } else if (copies[s.id] != std::multiset<int>{-1, 1}) {
      report.add("DoubleCoverBroken", {s.id}, "copy tags are not {+,-}");
    }
  }
  return report;
}

namespace {

const ChartSquare* square_for(const DesingMap& m, const StratumId& base) {
  for (const auto& sq : m.chart_squares) {
    if (sq.base == base) return &sq;
  }
  return nullptr;
}

}  // namespace

Report check_unbending_is_tm(const UnbendResult& result, const GridSpec& grid) {
  Report report;
  const auto& m = result.map;
  if (m.identity) return report;
  const auto& X = *m.target;
  const auto& Xh = *m.source;
  for (const auto& [id, tags] : m.provenance) {
    if (!Xh.contains(id)) report.add("DanglingProvenance", {id});
    for (const auto& tag : tags) {
      if (!X.contains(tag.target)) report.add("DanglingProvenance", {id, tag.target});
    }
  }
  if (!report.ok()) return report;

  // Tubes kept from X are carried onto tubes of X.
  for (const auto& [base, tube] : Xh.tm().tubes) {
    auto r = m.copy_target(base);
    const Tube* below = r ? X.tube(*r) : nullptr;
    if (!below) {
      report.add("TubeNotPreserved", {base}, "no tube downstairs");
      continue;
    }
    auto fp = below->footprint();
    for (const auto& s : tube.footprint()) {
      auto t = m.copy_target(s);
      if (!t || !fp.count(*t)) report.add("TubeNotPreserved", {base, s});
    }
  }
  // Unbent tubes: S x Q x R sweeps out the stratum fiber_S(Q) on both sides of t = 0.
  for (const auto& ut : result.tubes) {
    const Tube* tube = X.tube(ut.base);
    if (!tube) {
      report.add("TubeNotPreserved", {ut.base}, "removed stratum had no tube");
      continue;
    }
    for (const auto& [q, piece] : ut.fiber) {
      if (!has_fiber_tag(m, piece, ut.base, q)) {
        report.add("TubeNotPreserved", {ut.base, piece}, "missing fiber tag");
      }
      auto amb = tube->fiber.find(q);
      auto t = m.copy_target(piece);
      if (amb != tube->fiber.end() && (!t || *t != amb->second)) {
        report.add("TubeNotPreserved", {ut.base, piece}, "piece projects outside the tube");
      }
    }
    std::set<int> copies{ut.halves[0].copy, ut.halves[1].copy};
    std::set<int> signs{ut.halves[0].t_sign, ut.halves[1].t_sign};
    if (copies != std::set<int>{-1, 1} || signs != std::set<int>{-1, 1}) {
      report.add("RadiumRelationBroken", {ut.base}, "halves do not split t by sign");
    }
    const ChartSquare* sq = square_for(m, ut.base);
    if (!sq) {
      report.add("RadiumRelationBroken", {ut.base}, "no chart square");
      continue;
    }
    for (const auto& p : model_grid(sq->top, grid)) {
      Env env{p.u, p.l, p.r};
      double rho_hat = ut.signed_radium.eval_real(env);
      double rho = sq->c.a3.eval_real(env);
      if (std::abs(rho_hat) != rho) {
        report.add("RadiumRelationBroken", {ut.base}, "t=" + std::to_string(p.r));
        break;
      }
    }
  }
  return report;
}

Report check_chart_squares(const UnbendResult& result, const GridSpec& grid) {
  Report report;
  const auto& m = result.map;
  const auto& X = *m.target;
  const UnbentTube* ut = nullptr;
  for (const auto& sq : m.chart_squares) {
    const Tube* tube = X.tube(sq.base);
    for (const auto& t : result.tubes) {
      if (t.base == sq.base) ut = &t;
    }
    if (!tube || !ut) {
      report.add("ChartSquareBroken", {sq.base}, "no tube");
      continue;
    }
    for (const auto& p : model_grid(sq.top, grid)) {
      // Through the unbent space: the piece containing (u,l,t), then down.
      auto it = sq.top_strata.find(p.l.stratum);
      if (it == sq.top_strata.end()) {
        report.add("ChartSquareBroken", {sq.base}, "no piece for " + to_string(p.l));
        break;
      }
      std::optional<StratumId> via;
      if (p.r == 0.0) {
        if (has_fiber_tag(m, it->second, sq.base, p.l.stratum)) via = sq.base;
      } else {
        int side = p.r > 0.0 ? 1 : -1;
        int copy = ut->halves[0].t_sign == side ? ut->halves[0].copy : ut->halves[1].copy;
        for (const auto& tag : tags_of(m, it->second)) {
          if (copy_sign(tag.kind) == copy) via = tag.target;
        }
      }
      ModelPoint down_pt{p.u, p.l, std::abs(p.r)};
      // Through the chart: c, then the tube of X.
      ModelPoint q = eval_basic(sq.c, p);
      std::optional<StratumId> chart;
      if (q.r == 0.0) {
        chart = sq.base;
      } else if (auto f = tube->fiber.find(q.l.stratum); f != tube->fiber.end()) {
        chart = f->second;
      }
      if (!via || via != chart || !same_cone_point(down_pt, q)) {
        report.add("ChartSquareBroken", {sq.base}, "at " + to_string(p.l) + ", t=" + std::to_string(p.r));
        break;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// lifting

LiftedBasic lift_basic_morphism(const BasicMorphism& f, int sign, const GridSpec& grid,
                                bool cylinder_codomain) {
  if (f.domain.cylinder || f.codomain.cylinder) {
    throw Error(ErrorCode::InvalidInput, "lift expects a morphism of cone models");
  }
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidInput, "sign must be +1 or -1");
  LiftedBasic out;
  bool a3_zero = true;
  for (const auto& p : model_grid(f.domain, grid)) {
    double v = f.a3.eval_real(Env{p.u, p.l, p.r});
    if (p.r == 0.0 && std::abs(v) > kTol) {
      throw Error(ErrorCode::VertexObstruction,
                  f.name + ": a3(u,l,0) = " + std::to_string(v) + " at " + to_string(p.l));
    }
    a3_zero = a3_zero && std::abs(v) <= kTol;
  }
  out.parity.vertex_ok = true;

  Substitution even;
  even.r = Expr::abs(Expr::r());
  BasicMorphism& g = out.map;
  g.name = f.name + "^";
  g.domain = f.domain;
  g.domain.cylinder = true;
  g.codomain = f.codomain;
  g.codomain.cylinder = cylinder_codomain;
  for (const auto& c : f.a1) g.a1.push_back(simplify(substitute(c, even)));
  g.a2 = simplify(substitute(f.a2, even));
  if (!cylinder_codomain) {
    g.a3 = simplify(substitute(f.a3, even));
    out.parity.parity = "even";
  } else if (a3_zero) {
    g.a3 = Expr::constant(0.0);
    out.parity.parity = "even";
  } else {
    Expr odd = Expr::mul(Expr::sgn(Expr::r()), substitute(f.a3, even));
    g.a3 = simplify(sign > 0 ? odd : Expr::neg(odd));
    out.parity.parity = "odd";
  }

  // (b) parity of every component on the grid.
  const bool odd = out.parity.parity == "odd";
  out.parity.parity_ok = true;
  for (const auto& p : model_grid(g.domain, grid)) {
    if (p.r <= 0.0) continue;
    Env pos{p.u, p.l, p.r};
    Env neg{p.u, p.l, -p.r};
    bool ok = g.a2.eval_link(pos) == g.a2.eval_link(neg);
    for (const auto& c : g.a1) ok = ok && std::abs(c.eval_real(pos) - c.eval_real(neg)) <= kTol;
    double a = g.a3.eval_real(pos);
    double b = g.a3.eval_real(neg);
    ok = ok && std::abs(odd ? a + b : a - b) <= kTol;
    if (!ok) {
      out.parity.parity_ok = false;
      out.parity.report.add("ParityViolated", {}, g.name + " at " + to_string(p.l));
      break;
    }
  }

  // (c) smooth extension across t = 0.
  bool structural = g.a2.is_smooth() && g.a3.is_smooth();
  for (const auto& c : g.a1) structural = structural && c.is_smooth();
  if (structural) {
    out.parity.smooth_ok = true;
    out.parity.smooth_reason = "structurally smooth";
  } else {
    const double h = 1e-5;
    out.parity.smooth_ok = true;
    out.parity.smooth_reason = "one-sided derivatives agree at t = 0";
    for (const auto& u : u_lattice(g.domain.u_dim, grid)) {
      for (const auto& l : g.domain.link->samples()) {
        auto slope_gap = [&](const Expr& e) {
          double fp = e.eval_real(Env{u, l, h});
          double f0 = e.eval_real(Env{u, l, 0.0});
          double fm = e.eval_real(Env{u, l, -h});
          return std::abs((fp - f0) - (f0 - fm)) / h;
        };
        bool ok = slope_gap(g.a3) <= 1e-3;
        for (const auto& c : g.a1) ok = ok && slope_gap(c) <= 1e-3;
        if (!ok && out.parity.smooth_ok) {
          out.parity.smooth_ok = false;
          out.parity.smooth_reason = "kink at t = 0";
          out.parity.report.add("NotSmoothAtZero", {}, g.name + " at " + to_string(l));
        }
      }
    }
  }
  return out;
}

namespace {

struct Preimages {
  std::map<StratumId, std::vector<std::pair<StratumId, int>>> copies;  // R -> (piece, sign)
  std::map<std::pair<StratumId, StratumId>, StratumId> fibers;         // (S,Q) -> piece
};

Preimages index_preimages(const DesingMap& m) {
  Preimages p;
  for (const auto& [id, tags] : m.provenance) {
    for (const auto& tag : tags) {
      if (tag.kind == ProvKind::TubeFiber) {
        p.fibers[{tag.target, *tag.link_stratum}] = id;
      } else {
        p.copies[tag.target].emplace_back(id, copy_sign(tag.kind));
      }
    }
  }
  return p;
}

/// Piece over `r` on side `copy` (0 for either).
std::optional<StratumId> copy_preimage(const Preimages& p, const StratumId& r, int copy) {
  auto it = p.copies.find(r);
  if (it == p.copies.end()) return std::nullopt;
  for (const auto& [id, sign] : it->second) {
    if (sign == 0 || copy == 0 || sign == copy) return id;
  }
  return std::nullopt;
}

StratumId link_stratum_image(const StratMorphism& f, const StratumId& s, const StratumId& q) {
  const LocalMorphism* local = f.local_at(s);
  if (!local) throw Error(ErrorCode::NotLiftable, f.name + " has no chart at " + s.str());
  std::vector<double> u(local->map.domain.u_dim, 0.0);
  return local->map.a2.eval_link(Env{u, LinkSample{q, 0}, 0.5}).stratum;
}

}  // namespace

LiftResult lift_morphism(const StratMorphism& f, const UnbendResult& from, const UnbendResult& to,
                         int sign, const GridSpec& grid) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidInput, "sign must be +1 or -1");
  auto same = [](const SpacePtr& a, const SpacePtr& b) {
    return a == b || (a && b && structurally_equal(*a, *b));
  };
  if (!same(f.domain, from.map.target) || !same(f.codomain, to.map.target)) {
    throw Error(ErrorCode::InvalidInput, f.name + " does not match the unbent spaces");
  }
  const std::set<StratumId> min_x(from.order.begin(), from.order.end());
  const std::set<StratumId> min_y(to.order.begin(), to.order.end());
  const Preimages up = index_preimages(to.map);

  LiftResult out;
  StratMorphism& g = out.lifted;
  g.name = f.name + "^";
  g.domain = from.unbent;
  g.codomain = to.unbent;
  g.flags = f.flags;

  for (const auto& s : from.unbent->strata()) {
    const auto& tags = tags_of(from.map, s.id);
    std::optional<StratumId> r = from.map.copy_target(s.id);
    std::set<int> copies;
    std::optional<std::pair<StratumId, StratumId>> fiber;
    for (const auto& tag : tags) {
      if (tag.kind == ProvKind::TubeFiber) {
        if (!fiber) fiber = std::pair{tag.target, *tag.link_stratum};
      } else {
        copies.insert(copy_sign(tag.kind));
      }
    }
    std::optional<StratumId> image;
    if (r && !min_y.count(f.stratum_map.at(*r))) {
      const StratumId& r2 = f.stratum_map.at(*r);
      auto merged = copy_preimage(up, r2, 0);
      auto it = up.copies.find(r2);
      bool split = it != up.copies.end() && it->second.size() == 2 && it->second[0].first != it->second[1].first;
      if (!split) {
        image = merged;
      } else if (copies.size() == 2) {
        throw Error(ErrorCode::NotLiftable, s.id.str() + " is connected but its image copies are not");
      } else {
        int c = *copies.begin() == 0 ? 1 : *copies.begin();
        image = copy_preimage(up, r2, c * sign);
      }
    } else if (fiber) {
      // Lands on the level t = 0 of an unbent tube of the codomain.
      const StratumId& s2 = f.stratum_map.at(r ? *r : fiber->first);
      if (!min_y.count(s2)) throw Error(ErrorCode::NotLiftable, s.id.str() + " has no image piece");
      StratumId q2 = link_stratum_image(f, fiber->first, fiber->second);
      auto it = up.fibers.find({s2, q2});
      if (it != up.fibers.end()) image = it->second;
    }
    if (!image) throw Error(ErrorCode::NotLiftable, "no image piece for " + s.id.str());
    g.stratum_map.emplace(s.id, *image);
  }

  for (const auto& local : f.locals) {
    if (!min_x.count(local.source)) {
      if (min_y.count(local.target)) {
        throw Error(ErrorCode::NotLiftable, "chart " + local.chart + " falls into a removed stratum");
      }
      auto src = copy_preimage(index_preimages(from.map), local.source, 0);
      if (!src) throw Error(ErrorCode::NotLiftable, "no piece over " + local.source.str());
      g.locals.push_back({*src, local.chart, g.stratum_map.at(*src), local.target_chart, local.map});
      continue;
    }
    const bool into_tube = min_y.count(local.target) > 0;
    LiftedBasic lifted;
    try {
      lifted = lift_basic_morphism(local.map, sign, grid, into_tube);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::VertexObstruction) throw Error(ErrorCode::NotLiftable, e.what());
      throw;
    }
    if (!lifted.parity.report.ok()) {
      throw Error(ErrorCode::NotLiftable, local.chart + ": " + lifted.parity.report.violations.front().code);
    }
    StratumId target = local.target;
    if (!into_tube) {
      auto t = copy_preimage(up, local.target, 0);
      if (!t) throw Error(ErrorCode::NotLiftable, "no piece over " + local.target.str());
      target = *t;
    }
    g.cylinder_locals.push_back({local.source, local.chart, target, local.target_chart, lifted.map});
    out.parity.push_back(std::move(lifted.parity));
  }
  return out;
}

Report check_lift_square(const StratMorphism& f, const StratMorphism& lifted, const UnbendResult& from,
                         const UnbendResult& to, const GridSpec& grid) {
  Report report;
  for (const auto& [s, image] : lifted.stratum_map) {
    auto d = down(from.map, s);
    auto d2 = down(to.map, image);
    if (!d || !d2) {
      report.add("LiftSquareBroken", {s}, "missing provenance");
      continue;
    }
    const StratumId& expected = f.stratum_map.at(*d);
    if (*d2 != expected && !has_fiber_tag(to.map, image, expected)) {
      report.add("LiftSquareBroken", {s, image}, "strata do not commute");
    }
  }
  for (const auto& cl : lifted.cylinder_locals) {
    const LocalMorphism* lf = nullptr;
    for (const auto& l : f.locals) {
      if (l.source == cl.source && l.chart == cl.chart) lf = &l;
    }
    if (!lf) {
      report.add("LiftSquareBroken", {cl.source}, "no chart below " + cl.chart);
      continue;
    }
    for (const auto& p : model_grid(cl.map.domain, grid)) {
      ModelPoint lhs = eval_basic(lf->map, {p.u, p.l, std::abs(p.r)});
      ModelPoint q = eval_basic(cl.map, p);
      if (cl.map.codomain.cylinder) q.r = std::abs(q.r);
      if (!same_cone_point(lhs, q)) {
        report.add("LiftSquareBroken", {cl.source},
                   cl.chart + " at " + to_string(p.l) + ", t=" + std::to_string(p.r));
        break;
      }
    }
  }
  return report;
}

StratMorphism unbent_identity(const UnbendResult& result) {
  StratMorphism f = identity_morphism(result.unbent);
  if (result.map.identity) return f;
  for (const auto& ut : result.tubes) {
    BasicModel model{result.map.target->stratum(ut.base).dim, ut.link, true};
    for (const auto& chart : ut.charts) f.cylinder_locals.push_back({ut.base, chart.id, ut.base, chart.id, identity_basic(model)});
  }
  return f;
}

StratMorphism deck_swap(const UnbendResult& result) {
  StratMorphism f = unbent_identity(result);
  f.name = "deck";
  if (result.map.identity) return f;
  for (auto& [s, image] : f.stratum_map) {
    const auto& t = s.tokens();
    if (t.empty()) continue;
    if (t.front() == "cp+" || t.front() == "cp-") {
      std::vector<std::string> swapped = t;
      swapped.front() = t.front() == "cp+" ? "cp-" : "cp+";
      image = StratumId(std::move(swapped));
    }
  }
  for (auto& local : f.cylinder_locals) {
    local.map.name = "deck";
    local.map.a3 = Expr::neg(Expr::r());
  }
  return f;
}

}  // namespace stratcalc

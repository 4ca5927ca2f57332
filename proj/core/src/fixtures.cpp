#include "stratcalc/fixtures.hpp"

#include <algorithm>
#include <random>

#include "stratcalc/error.hpp"

namespace stratcalc::fixtures {

using E = StratSpaceExpr;

SpacePtr smooth_surface() { return present(E::smooth("M", 2, true)); }

SpacePtr cone_circle() { return present(E::cone(E::smooth("S1", 1, true))); }

SpacePtr line_times_cone() {
  return present(E::product({"U", 1, false}, E::cone(E::smooth("S1", 1, true))));
}

SpacePtr sigma_circle() { return suspension(present(E::smooth("N", 1, true))); }

SpacePtr cone_sigma() { return present(E::cone(E::suspension(E::smooth("N", 1, true)))); }

SpacePtr cone_pair() {
  return present(E::disjoint({E::cone(E::smooth("S1", 1, true)), E::cone(E::smooth("S1", 1, true))}));
}

LinkMap antipodal(const PresentedSpace& circle) {
  const int n = circle.strata().front().samples;
  return rotation_map(circle, n / 2, "a");
}

SpacePtr twisted_bundle() {
  auto circle = present(E::smooth("S1", 1, true));
  const StratumId base({"tw:base"});
  const StratumId total({"tw:total"});
  Tube t;
  t.base = base;
  t.link = circle;
  t.charts = {{"b#0", base, ChartKind::BundleChart}, {"b#1", base, ChartKind::BundleChart}};
  t.group = CocycleGroup::from_elements({identity_map(*circle, "id"), antipodal(*circle)});
  t.transitions = {{"b#0", "b#1", "a"}};
  t.triples = {{"b#0", "b#1", "b#0"}};
  t.fiber.emplace(circle->strata().front().id, total);
  TMStructure tm;
  tm.tubes.emplace(base, std::move(t));
  auto space = std::make_shared<PresentedSpace>(
      std::vector<Stratum>{{base, 1, "base", 8}, {total, 3, "total", 8}},
      std::vector<std::pair<StratumId, StratumId>>{{base, base}, {total, total}, {base, total}},
      std::map<StratumId, SpacePtr>{{base, circle}}, std::move(tm), false);
  return space->with_tm(separate_tubes(*space, space->tm()));
}

namespace {

BasicModel model_at(const SpacePtr& space, const StratumId& s) {
  return {space->stratum(s).dim, space->link(s), false};
}

void replace_locals(StratMorphism& f, const StratumId& base, const BasicMorphism& m) {
  for (auto& l : f.locals) {
    if (l.source == base) l.map = m;
  }
}

}  // namespace

StratMorphism link_rotation(const SpacePtr& space, const StratumId& base, int shift) {
  StratMorphism f = identity_morphism(space);
  f.name = "rot" + std::to_string(shift);
  LinkMap g = rotation_map(*space->link(base), shift, f.name);
  replace_locals(f, base, cocycle_basic(model_at(space, base), g));
  return f;
}

StratMorphism pole_swap(const SpacePtr& sigma) {
  const StratumId plus({"p+"});
  const StratumId minus({"p-"});
  StratMorphism f;
  f.name = "swap";
  f.domain = sigma;
  f.codomain = sigma;
  for (const auto& s : sigma->strata()) f.stratum_map.emplace(s.id, s.id);
  f.stratum_map[plus] = minus;
  f.stratum_map[minus] = plus;
  for (const auto& [a, b] : {std::pair{plus, minus}, std::pair{minus, plus}}) {
    BasicMorphism m = identity_basic(model_at(sigma, a));
    m.name = "swap";
    f.locals.push_back({a, sigma->tube(a)->charts.front().id, b, sigma->tube(b)->charts.front().id, m});
  }
  f.flags = {true, true, true, true};
  return f;
}

StratMorphism warp(const SpacePtr& line_cone) {
  const StratumId base({"x:U", "v"});
  StratMorphism f = identity_morphism(line_cone);
  f.name = "warp";
  BasicMorphism m = identity_basic(model_at(line_cone, base));
  m.name = "warp";
  Expr u2 = Expr::u(0) * Expr::u(0);
  m.a1 = {u2};
  m.a3 = Expr::r() * (Expr::constant(1.0) + u2);
  replace_locals(f, base, m);
  f.flags = {true, false, false, false};
  return f;
}

StratMorphism cone_embedding(const SpacePtr& cone, const SpacePtr& cone_sig) {
  const StratumId v({"v"});
  const StratumId circle({"m:S1"});
  const StratumId body({"s", "m:N"});
  StratMorphism f;
  f.name = "embed";
  f.domain = cone;
  f.codomain = cone_sig;
  f.stratum_map = {{v, v}, {circle.prefixed("c"), body.prefixed("c")}};
  LinkMap h;
  h.name = "h";
  h.strata.emplace(circle, body);
  const int n = cone->link(v)->stratum(circle).samples;
  for (int i = 0; i < n; ++i) h.samples.emplace(LinkSample{circle, i}, LinkSample{body, i});
  BasicMorphism m;
  m.name = "embed";
  m.domain = model_at(cone, v);
  m.codomain = model_at(cone_sig, v);
  m.a2 = Expr::apply(h, Expr::l());
  f.locals.push_back({v, "v#0", v, "v#0", m});
  f.flags = {true, true, true, true};
  return f;
}

StratMorphism bundle_twist(const SpacePtr& bundle) {
  const StratumId base({"tw:base"});
  StratMorphism f = identity_morphism(bundle);
  f.name = "twist";
  replace_locals(f, base, cocycle_basic(model_at(bundle, base), antipodal(*bundle->link(base))));
  return f;
}

std::vector<NamedSpace> reference_spaces() {
  return {{"smooth", smooth_surface()}, {"cone-circle", cone_circle()}, {"cone-sigma", cone_sigma()}};
}

// ---------------------------------------------------------------------------
// generator

namespace {

class Generator {
 public:
  Generator(std::uint64_t seed, int budget) : rng_(seed), budget_(budget) {}

  void reset() { pieces_ = 0; }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string fresh(const char* stem) { return stem + std::to_string(next_++); }

  /// Disjoint unions are only drawn while the space is still small, so the
  /// recursion stays finite.
  bool may_split() { return ++pieces_ < budget_; }

  /// Pure n-dimensional compact space of length p (needs n >= p).
  E compact(int n, int p) {
    if (p == 0) return E::smooth(fresh("M"), n, true);
    for (;;) {
      switch (pick(0, 3)) {
        case 0:
        case 1:
          return E::suspension(compact(n - 1, p - 1));
        case 2:
          if (n - p >= 1) {
            int m = pick(1, n - p);
            return E::product({fresh("K"), m, true}, compact(n - m, p));
          }
          break;
        default:
          if (may_split()) return E::disjoint({compact(n, p), compact(n, pick(0, p))});
          break;
      }
    }
  }

  E open(int n, int p) {
    if (p == 0) return E::smooth(fresh("U"), n, false);
    for (;;) {
      switch (pick(0, 4)) {
        case 0:
        case 1:
          return E::cone(compact(n - 1, p - 1));
        case 2:
          if (n - p >= 1) {
            int m = pick(1, n - p);
            return E::product({fresh("R"), m, false}, open(n - m, p));
          }
          break;
        case 3:
          if (may_split()) return E::disjoint({open(n, p), open(n, pick(0, p))});
          break;
        default:
          return E::suspension(compact(n - 1, p - 1));
      }
    }
  }

 private:
  std::mt19937_64 rng_;
  int budget_;
  int pieces_ = 0;
  int next_ = 0;
};

}  // namespace

std::vector<NamedSpace> generate_corpus(std::uint64_t seed, int count, int min_length, int max_length,
                                        int max_strata) {
  if (min_length < 0 || max_length < min_length) throw Error(ErrorCode::InvalidInput, "bad length range");
  Generator gen(seed, std::max(1, max_strata / 4));
  std::vector<NamedSpace> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000 * (count + 1)) {
      throw Error(ErrorCode::InvalidInput, "generator cannot meet the stratum budget");
    }
    gen.reset();
    int p = gen.pick(min_length, max_length);
    int n = gen.pick(std::max(p, 1), p + 2);
    SpacePtr space = present(gen.open(n, p));
    if (static_cast<int>(space->size()) > max_strata || length(*space) != p) continue;
    out.push_back({"gen-" + std::to_string(seed) + "-" + std::to_string(out.size()), space});
  }
  return out;
}

}  // namespace stratcalc::fixtures

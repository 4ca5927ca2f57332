#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "stratcalc/error.hpp"
#include "stratcalc/fixtures.hpp"
#include "stratcalc/unbend.hpp"

using namespace stratcalc;
using oracle::id;

namespace {

std::vector<ProvKind> kinds(const DesingMap& m, const StratumId& s) {
  std::vector<ProvKind> out;
  for (const auto& t : m.provenance.at(s)) out.push_back(t.kind);
  return out;
}

BasicModel circle_cone(int u_dim) {
  return {u_dim, present(StratSpaceExpr::smooth("S1", 1, true)), false};
}

}  // namespace

TEST(UnbendChart, FoldsTheLine) {
  auto sq = unbend_chart(circle_cone(1));
  LinkSample l{id("m:S1"), 2};
  ModelPoint q = eval_basic(sq.c, {{0.5}, l, -0.5});
  EXPECT_EQ(q.u, std::vector<double>{0.5});
  EXPECT_EQ(q.l, l);
  EXPECT_EQ(q.r, 0.5);
  EXPECT_EQ(eval_basic(sq.c, {{0.5}, l, 0.0}).r, 0.0);
  for (const auto& p : model_grid(sq.top)) {
    ModelPoint a = eval_basic(sq.c, p);
    ModelPoint b = eval_basic(sq.c, {p.u, p.l, -p.r});
    EXPECT_TRUE(same_cone_point(a, b, 0.0));
  }
}

TEST(UnbendSpace, SmoothIsIdentity) {
  auto m = fixtures::smooth_surface();
  auto u = unbend_space(m);
  EXPECT_TRUE(u.map.identity);
  EXPECT_EQ(u.unbent, m);
  EXPECT_EQ(kinds(u.map, id("m:M")), std::vector<ProvKind>{ProvKind::Identity});
}

TEST(UnbendSpace, ConeOverCircle) {
  auto u = unbend_space(fixtures::cone_circle());
  const auto& x = *u.unbent;
  ASSERT_EQ(x.size(), 1u);
  EXPECT_EQ(x.strata()[0].id, id("ub/c/m:S1"));
  EXPECT_EQ(x.strata()[0].dim, 2);
  EXPECT_EQ(length(x), 0);
  EXPECT_EQ(kinds(u.map, id("ub/c/m:S1")),
            (std::vector<ProvKind>{ProvKind::CopyPlus, ProvKind::CopyMinus, ProvKind::TubeFiber}));
  ASSERT_EQ(u.tubes.size(), 1u);
  EXPECT_EQ(u.tubes[0].fiber.size(), 1u);
  EXPECT_EQ(u.tubes[0].length, 0);
  EXPECT_TRUE(x.tm().tubes.empty());
}

TEST(UnbendSpace, ConeOverSuspension) {
  auto u = unbend_space(fixtures::cone_sigma());
  const auto& x = *u.unbent;
  EXPECT_EQ(x.size(), 3u);
  EXPECT_EQ(length(x), 1);
  EXPECT_EQ(oracle::minima(x), (std::set<StratumId>{id("ub/c/p+"), id("ub/c/p-")}));
  EXPECT_EQ(x.stratum(id("ub/c/p+")).dim, 1);
  EXPECT_EQ(x.stratum(id("ub/c/s/m:N")).dim, 3);
  ASSERT_EQ(u.tubes.size(), 1u);
  EXPECT_EQ(u.tubes[0].fiber.size(), 3u);
  EXPECT_EQ(u.tubes[0].length, 1);
  // Tubes of sigma N's poles, crossed with the line.
  EXPECT_EQ(x.tm().tubes.size(), 2u);
  EXPECT_TRUE(x.tube(id("ub/c/p+")) != nullptr);
  EXPECT_TRUE(structurally_equal(*x.link(id("ub/c/p+")), *present(StratSpaceExpr::smooth("N", 1, true))));
  EXPECT_TRUE(validate_pseudomanifold(x).ok());
  EXPECT_TRUE(validate_tm(x).ok());
}

TEST(UnbendSpace, KeepsCocycles) {
  auto b = fixtures::twisted_bundle();
  auto u = unbend_space(b);
  ASSERT_EQ(u.tubes.size(), 1u);
  EXPECT_EQ(u.tubes[0].group.table, b->tube(id("tw:base"))->group.table);
  EXPECT_EQ(u.tubes[0].transitions, b->tube(id("tw:base"))->transitions);
  EXPECT_EQ(u.unbent->size(), 1u);
}

TEST(UnbendSpace, ProductWithConeIsCylinder) {
  // U x c(S^1) unbends to U x S^1 x R: one stratum of dimension 3.
  auto u = unbend_space(fixtures::line_times_cone());
  auto cylinder = present(StratSpaceExpr::product({"U", 1, false}, StratSpaceExpr::smooth("S1xR", 2, false)));
  EXPECT_TRUE(iso_check(*u.unbent, *cylinder).has_value());
  EXPECT_TRUE(check_chart_squares(u).ok());
}

TEST(UnbendSpace, DisjointConesGoTogether) {
  auto u = unbend_space(fixtures::cone_pair());
  EXPECT_EQ(u.order, (std::vector<StratumId>{id("d:0/v"), id("d:1/v")}));
  EXPECT_EQ(u.unbent->size(), 2u);
  auto r = unbend_space(fixtures::cone_pair(), {true});
  EXPECT_EQ(r.order, (std::vector<StratumId>{id("d:1/v"), id("d:0/v")}));
  EXPECT_TRUE(iso_check(*u.unbent, *r.unbent).has_value());
}

TEST(UnbendSpace, RequiresSeparatedTubes) {
  auto s = fixtures::sigma_circle();
  TMStructure tm = s->tm();
  tm.families.clear();
  try {
    unbend_space(s->with_tm(tm));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);  // the structure itself is invalid
  }
}

TEST(UnbendSpace, CorpusLawsHold) {
  for (const auto& [name, x] : fixtures::generate_corpus(41, 120)) {
    auto u = unbend_space(x);
    EXPECT_EQ(length(*u.unbent), length(*x) - 1) << name;
    EXPECT_TRUE(validate_pseudomanifold(*u.unbent).ok()) << name;
    auto tm = validate_tm(*u.unbent);
    EXPECT_TRUE(tm.ok()) << name << ": " << (tm.ok() ? "" : tm.violations.front().code);
    EXPECT_TRUE(check_double_cover(u).ok()) << name;
    EXPECT_TRUE(check_unbending_is_tm(u).ok()) << name;
    EXPECT_TRUE(check_chart_squares(u).ok()) << name;
    auto r = unbend_space(x, {true});
    EXPECT_TRUE(iso_check(*u.unbent, *r.unbent).has_value()) << name;
  }
}

TEST(Faults, CorruptedProvenance) {
  auto u = unbend_space(fixtures::cone_sigma());
  for (auto& tag : u.map.provenance.at(id("ub/c/p+"))) {
    if (tag.kind == ProvKind::CopyPlus) tag.target = id("c/s/m:N");
  }
  auto r = check_unbending_is_tm(u);
  EXPECT_TRUE(r.has("TubeNotPreserved"));
}

TEST(Faults, BrokenRadiumSign) {
  auto u = unbend_space(fixtures::cone_circle());
  u.tubes[0].halves[1].t_sign = 1;
  EXPECT_TRUE(check_unbending_is_tm(u).has("RadiumRelationBroken"));
  auto v = unbend_space(fixtures::cone_circle());
  v.tubes[0].signed_radium = Expr::constant(2.0) * Expr::r();
  EXPECT_TRUE(check_unbending_is_tm(v).has("RadiumRelationBroken"));
}

TEST(Faults, BrokenDoubleCover) {
  auto u = unbend_space(fixtures::cone_sigma());
  auto& tags = u.map.provenance.at(id("ub/c/s/m:N"));
  tags.erase(tags.begin() + 1);
  EXPECT_TRUE(check_double_cover(u).has("DoubleCoverBroken"));
}

TEST(LiftBasic, OddRadius) {
  auto f = identity_basic(circle_cone(1));
  auto plus = lift_basic_morphism(f, 1);
  EXPECT_EQ(plus.parity.parity, "odd");
  EXPECT_TRUE(plus.parity.parity_ok && plus.parity.smooth_ok && plus.parity.vertex_ok);
  EXPECT_EQ(plus.map.a3, Expr::r());
  auto minus = lift_basic_morphism(f, -1);
  EXPECT_EQ(minus.map.a3, -Expr::r());
}

TEST(LiftBasic, ZeroRadius) {
  auto f = identity_basic(circle_cone(1));
  f.a3 = Expr::constant(0.0);
  auto g = lift_basic_morphism(f, 1);
  EXPECT_EQ(g.parity.parity, "even");
  EXPECT_EQ(g.map.a3, Expr::constant(0.0));
}

TEST(LiftBasic, VertexObstruction) {
  auto f = identity_basic(circle_cone(1));
  f.a3 = Expr::r() + Expr::constant(1.0);
  try {
    lift_basic_morphism(f, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VertexObstruction);
  }
}

TEST(LiftBasic, KinkIsReported) {
  auto f = identity_basic(circle_cone(1));
  f.a1 = {Expr::u(0) + Expr::r()};
  auto g = lift_basic_morphism(f, 1);
  EXPECT_FALSE(g.parity.smooth_ok);
  EXPECT_TRUE(g.parity.report.has("NotSmoothAtZero"));
}

TEST(LiftMorphism, IdentityBothSigns) {
  for (const auto& [name, x] : fixtures::reference_spaces()) {
    auto u = unbend_space(x);
    for (int sign : {1, -1}) {
      auto l = lift_morphism(identity_morphism(x), u, u, sign);
      if (sign > 0) EXPECT_FALSE(morphism_difference(l.lifted, unbent_identity(u)).has_value()) << name;
      EXPECT_TRUE(check_lift_square(identity_morphism(x), l.lifted, u, u).ok()) << name;
    }
  }
}

TEST(LiftMorphism, CocycleLift) {
  auto c = fixtures::cone_circle();
  auto u = unbend_space(c);
  auto f = fixtures::link_rotation(c, id("v"), 3);
  auto l = lift_morphism(f, u, u, 1);
  ASSERT_EQ(l.lifted.cylinder_locals.size(), 1u);
  const auto& m = l.lifted.cylinder_locals[0].map;
  EXPECT_EQ(m.a3, Expr::r());
  EXPECT_EQ(m.a2, f.locals[0].map.a2);
  EXPECT_TRUE(m.codomain.cylinder);
  ASSERT_EQ(l.parity.size(), 1u);
  EXPECT_TRUE(l.parity[0].parity_ok && l.parity[0].smooth_ok);
}

TEST(LiftMorphism, WarpSquare) {
  auto x = fixtures::line_times_cone();
  auto u = unbend_space(x);
  auto f = fixtures::warp(x);
  auto l = lift_morphism(f, u, u, 1);
  const auto& m = l.lifted.cylinder_locals.at(0).map;
  LinkSample s{id("m:S1"), 1};
  ModelPoint up = eval_basic(m, {{1.0}, s, -0.5});
  EXPECT_DOUBLE_EQ(up.u[0], 1.0);
  EXPECT_DOUBLE_EQ(up.r, -1.0);
  auto sq = unbend_chart(m.codomain.cylinder ? BasicModel{1, m.codomain.link, false} : m.codomain);
  ModelPoint via_lift = eval_basic(sq.c, up);
  ModelPoint via_f = eval_basic(f.locals.at(0).map, eval_basic(u.map.chart_squares.at(0).c, {{1.0}, s, -0.5}));
  EXPECT_TRUE(same_cone_point(via_lift, via_f));
  EXPECT_DOUBLE_EQ(via_f.r, 1.0);
  EXPECT_TRUE(check_lift_square(f, l.lifted, u, u).ok());
}

TEST(LiftMorphism, SignCoherence) {
  auto c = fixtures::cone_circle();
  auto u = unbend_space(c);
  for (int shift : {0, 1, 4}) {
    auto f = fixtures::link_rotation(c, id("v"), shift);
    auto plus = lift_morphism(f, u, u, 1).lifted;
    auto minus = lift_morphism(f, u, u, -1).lifted;
    auto deck = deck_swap(u);
    EXPECT_FALSE(morphism_difference(minus, compose(deck, plus)).has_value());
    EXPECT_FALSE(morphism_difference(minus, compose(plus, deck)).has_value());
  }
}

TEST(LiftMorphism, FunctorLaws) {
  auto b = fixtures::twisted_bundle();
  auto u = unbend_space(b);
  auto f = fixtures::bundle_twist(b);
  auto g = fixtures::link_rotation(b, id("tw:base"), 1);
  auto gf = compose(g, f);
  auto lg = lift_morphism(g, u, u, 1).lifted;
  auto lf = lift_morphism(f, u, u, 1).lifted;
  auto lgf = lift_morphism(gf, u, u, 1).lifted;
  auto diff = morphism_difference(lgf, compose(lg, lf), {}, 2e-9);
  EXPECT_FALSE(diff.has_value()) << *diff;
  auto back = compose(inverse_isomorphism(f), f);
  EXPECT_FALSE(morphism_difference(lift_morphism(back, u, u, 1).lifted, unbent_identity(u)).has_value());
}

TEST(LiftMorphism, EmbeddingIntoConeOverSuspension) {
  auto c = fixtures::cone_circle();
  auto cs = fixtures::cone_sigma();
  auto f = fixtures::cone_embedding(c, cs);
  auto uc = unbend_space(c);
  auto us = unbend_space(cs);
  auto l = lift_morphism(f, uc, us, 1);
  EXPECT_EQ(l.lifted.stratum_map.at(id("ub/c/m:S1")), id("ub/c/s/m:N"));
  EXPECT_TRUE(check_lift_square(f, l.lifted, uc, us).ok());
}

#include <gtest/gtest.h>

#include <functional>

#include "oracles.hpp"
#include "stratcalc/error.hpp"
#include "stratcalc/fixtures.hpp"
#include "stratcalc/unfold.hpp"

using namespace stratcalc;
using oracle::id;

namespace {

/// Copy words reaching `target` found by walking every provenance path by hand.
std::set<std::string> walk_words(const UnfoldResult& u, const StratumId& target) {
  std::set<std::string> out;
  std::function<void(int, const StratumId&, std::string)> down = [&](int k, const StratumId& s, std::string suffix) {
    if (k == 0) {
      if (s == target) out.insert(suffix);
      return;
    }
    for (const auto& tag : u.trace[k - 1].map.provenance.at(s)) {
      if (tag.kind == ProvKind::CopyPlus) down(k - 1, tag.target, "+" + suffix);
      if (tag.kind == ProvKind::CopyMinus) down(k - 1, tag.target, "-" + suffix);
    }
  };
  for (const auto& s : u.final->strata()) down(u.steps(), s.id, "");
  return out;
}

const ChartSquare& square_at(const UnfoldResult& u, const StratumId& s) {
  for (const auto& sq : u.chart_squares) {
    if (sq.base == s) return sq;
  }
  throw std::out_of_range(s.str());
}

SpacePtr double_suspension_cone() {
  return present(StratSpaceExpr::cone(StratSpaceExpr::given(suspension(fixtures::sigma_circle()))));
}

}  // namespace

TEST(UnfoldSpace, SmoothTakesNoSteps) {
  auto u = unfold_space(fixtures::smooth_surface());
  EXPECT_EQ(u->steps(), 0);
  EXPECT_EQ(u->final, u->source);
  EXPECT_EQ(u->composite.provenance.at(id("m:M")), (std::vector<SignWord>{{id("m:M"), ""}}));
}

TEST(UnfoldSpace, ConeOverCircle) {
  auto u = unfold_space(fixtures::cone_circle());
  EXPECT_EQ(u->steps(), 1);
  ASSERT_EQ(u->final->size(), 1u);
  EXPECT_EQ(u->final->strata()[0].dim, 2);
  EXPECT_EQ(u->composite.sign_words(id("c/m:S1")), (std::set<std::string>{"+", "-"}));
}

TEST(UnfoldSpace, ConeOverSuspension) {
  auto u = unfold_space(fixtures::cone_sigma());
  EXPECT_EQ(u->steps(), 2);
  ASSERT_EQ(u->final->size(), 1u);
  EXPECT_EQ(u->final->strata()[0].dim, 3);
  EXPECT_EQ(u->final->strata()[0].id, id("ub/ub/c/s/m:N"));
  EXPECT_EQ(u->composite.sign_words(id("c/s/m:N")), walk_words(*u, id("c/s/m:N")));
  EXPECT_EQ(u->composite.sign_words(id("c/s/m:N")).size(), 4u);
}

TEST(UnfoldSpace, CorpusTerminatesFlat) {
  for (const auto& [name, x] : fixtures::generate_corpus(51, 100)) {
    auto u = unfold_space(x);
    EXPECT_EQ(u->steps(), length(*x)) << name;
    EXPECT_TRUE(classify_strata(*u->final).singular.empty()) << name;
    for (const auto& sq : u->chart_squares) {
      auto r = check_unfoldable_square(*x, sq, *u->link_unfoldings.at(sq.base));
      EXPECT_TRUE(r.ok()) << name << " " << sq.base.str() << ": " << (r.ok() ? "" : r.violations.front().detail);
    }
    for (const auto& s : classify_strata(*x).regular) {
      auto words = u->composite.sign_words(s);
      EXPECT_GE(words.size(), 1u) << name;
      EXPECT_EQ(words, walk_words(*u, s)) << name;
      for (const auto& w : words) EXPECT_EQ(static_cast<int>(w.size()), u->steps()) << name;
    }
  }
}

TEST(UnfoldableChart, SmoothLinkGivesUnbendingChart) {
  auto c = fixtures::cone_circle();
  auto u = unfold_space(c);
  ASSERT_EQ(u->chart_squares.size(), 1u);
  const auto& sq = u->chart_squares[0];
  EXPECT_EQ(sq.c.a2, Expr::l());
  EXPECT_EQ(sq.c.a3, unbend_chart(sq.bottom).c.a3);
}

TEST(UnfoldableChart, ConeOverSuspensionBothWays) {
  auto c = fixtures::cone_sigma();
  auto u = unfold_space(c);
  const auto& lu = *u->link_unfoldings.at(id("v"));
  EXPECT_EQ(lu.steps(), 1);
  const auto& sq = square_at(*u, id("v"));
  for (const auto& l : lu.final->samples()) {
    ModelPoint a = eval_basic(sq.c, {{}, l, -0.5});
    LinkSample down = lu.trace[0].map.project_sample(l).first;
    EXPECT_TRUE(same_cone_point(a, {{}, down, 0.5}));
  }
  EXPECT_TRUE(check_unfoldable_square(*c, sq, lu).ok());
}

TEST(UnfoldableChart, WrongStepOrderIsCaught) {
  auto c = double_suspension_cone();
  auto u = unfold_space(c);
  const auto& lu = *u->link_unfoldings.at(id("v"));
  ASSERT_EQ(lu.steps(), 2);
  auto sq = square_at(*u, id("v"));
  EXPECT_TRUE(check_unfoldable_square(*c, sq, lu).ok());
  sq.c.a2 = Expr::apply(link_projection(lu, {0, 1}), Expr::l());
  EXPECT_FALSE(check_unfoldable_square(*c, sq, lu).ok());
}

TEST(UnfoldableChart, MissingLinkUnfolding) {
  auto c = fixtures::cone_sigma();
  try {
    unfoldable_chart(*c, id("v"), nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingLinkUnfolding);
  }
  try {
    unfoldable_chart(*c, id("v"), unfold_space(fixtures::smooth_surface()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingLinkUnfolding);
  }
}

TEST(LiftToUnfolding, Identity) {
  for (const auto& [name, x] : fixtures::reference_spaces()) {
    auto u = unfold_space(x);
    auto l = lift_to_unfolding(identity_morphism(x), *u, *u);
    EXPECT_FALSE(morphism_difference(l.final, unfolded_identity(*u)).has_value()) << name;
  }
}

TEST(LiftToUnfolding, CocycleMorphism) {
  auto c = fixtures::cone_circle();
  auto u = unfold_space(c);
  auto f = fixtures::link_rotation(c, id("v"), 2);
  auto l = lift_to_unfolding(f, *u, *u);
  ASSERT_EQ(l.final.cylinder_locals.size(), 1u);
  EXPECT_EQ(l.final.cylinder_locals[0].map.a2, f.locals[0].map.a2);
  EXPECT_EQ(l.final.cylinder_locals[0].map.a3, Expr::r());
  EXPECT_TRUE(check_unfolded_squares(f, l, *u, *u).ok());
}

TEST(LiftToUnfolding, EmbeddingTakesTwoSteps) {
  auto c = fixtures::cone_circle();
  auto cs = fixtures::cone_sigma();
  auto f = fixtures::cone_embedding(c, cs);
  auto uc = unfold_space(c);
  auto us = unfold_space(cs);
  auto l = lift_to_unfolding(f, *uc, *us);
  EXPECT_EQ(l.steps.size(), 2u);
  EXPECT_EQ(l.final.stratum_map.at(id("ub/c/m:S1")), id("ub/ub/c/s/m:N"));
  auto r = check_unfolded_squares(f, l, *uc, *us);
  EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations.front().detail);
}

TEST(Harness, IdentitiesOnReferenceSpaces) {
  std::vector<HarnessSpace> spaces;
  for (const auto& [name, x] : fixtures::reference_spaces()) spaces.push_back({name, x});
  auto r = functor_harness(spaces, {});
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.count("identity"), 3u);
  EXPECT_EQ(r.count("uniqueness"), 3u);
}

TEST(Harness, CocycleAndItsInverse) {
  auto b = fixtures::twisted_bundle();
  auto f = fixtures::bundle_twist(b);
  auto g = inverse_isomorphism(f);
  auto r = functor_harness({{"bundle", b}}, {f, g});
  for (const auto& o : r.outcomes) EXPECT_TRUE(o.pass) << o.law << " " << o.subject << ": " << o.detail;
  EXPECT_EQ(r.count("composition"), 4u);
  auto u = unfold_space(b);
  auto back = lift_to_unfolding(compose(g, f), *u, *u);
  EXPECT_FALSE(morphism_difference(back.final, unfolded_identity(*u)).has_value());
}

TEST(Harness, ExcludesNonThomMather) {
  auto x = fixtures::line_times_cone();
  auto r = functor_harness({{"line-cone", x}}, {fixtures::warp(x)});
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded[0].second, "NotThomMather");
  EXPECT_EQ(r.count("composition"), 0u);
}

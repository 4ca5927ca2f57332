#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stratcalc/error.hpp"
#include "stratcalc/fixtures.hpp"
#include "stratcalc/space.hpp"

using namespace stratcalc;
using E = StratSpaceExpr;
using oracle::id;

namespace {

SpacePtr hand_cone(SpacePtr link, int top_dim) {
  StratumId v({"v"});
  StratumId b({"b"});
  return std::make_shared<PresentedSpace>(
      std::vector<Stratum>{{v, 0, "v", 8}, {b, top_dim, "b", 8}},
      std::vector<std::pair<StratumId, StratumId>>{{v, v}, {b, b}, {v, b}},
      std::map<StratumId, SpacePtr>{{v, link}}, TMStructure{}, false);
}

}  // namespace

TEST(Present, SmoothManifold) {
  auto m = fixtures::smooth_surface();
  ASSERT_EQ(m->size(), 1u);
  EXPECT_EQ(m->strata()[0].id, id("m:M"));
  EXPECT_EQ(m->dim(), 2);
  EXPECT_TRUE(m->compact());
  EXPECT_EQ(length(*m), 0);
}

TEST(Present, ConeOverCircle) {
  auto c = fixtures::cone_circle();
  ASSERT_EQ(c->size(), 2u);
  EXPECT_EQ(c->stratum(id("v")).dim, 0);
  EXPECT_EQ(c->stratum(id("c/m:S1")).dim, 2);
  EXPECT_TRUE(c->lt(id("v"), id("c/m:S1")));
  EXPECT_FALSE(c->compact());
  ASSERT_NE(c->tube(id("v")), nullptr);
  EXPECT_TRUE(validate_pseudomanifold(*c).ok());
}

TEST(Present, LineTimesCone) {
  auto p = fixtures::line_times_cone();
  ASSERT_EQ(p->size(), 2u);
  EXPECT_EQ(p->stratum(id("x:U/v")).dim, 1);
  EXPECT_EQ(p->stratum(id("x:U/c/m:S1")).dim, 3);
  EXPECT_EQ(length(*p), oracle::longest_chain(*p));
  EXPECT_EQ(length(*p), 1);
}

TEST(Present, ConeOverNonCompactIsRejected) {
  try {
    present(E::cone(E::smooth("R", 1, false)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConeOverNonCompact);
  }
}

TEST(Present, EmptyDisjointIsRejected) {
  try {
    present(E::disjoint({}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDisjoint);
  }
}

TEST(Present, SameExpressionSameIds) {
  auto a = fixtures::cone_sigma();
  auto b = fixtures::cone_sigma();
  EXPECT_TRUE(structurally_equal(*a, *b));
}

TEST(Length, MatchesChainEnumeration) {
  EXPECT_EQ(length(*fixtures::cone_circle()), 1);
  EXPECT_EQ(length(*fixtures::cone_sigma()), 2);
  EXPECT_EQ(oracle::longest_chain(*fixtures::cone_sigma()), 2);
  auto s = fixtures::sigma_circle();
  EXPECT_EQ(stratum_length(*s, id("p+")), 1);
  EXPECT_EQ(stratum_length(*s, id("s/m:N")), 0);
}

TEST(Length, ConeAndProductRulesOnCorpus) {
  for (const auto& [name, x] : fixtures::generate_corpus(7, 40)) {
    if (!x->compact()) continue;
    auto cone = present(E::cone(E::given(x)));
    EXPECT_EQ(length(*cone), length(*x) + 1) << name;
  }
  for (const auto& [name, x] : fixtures::generate_corpus(8, 40)) {
    auto prod = present(E::product({"R", 2, false}, E::given(x)));
    EXPECT_EQ(length(*prod), length(*x)) << name;
    EXPECT_EQ(length(*x), oracle::longest_chain(*x)) << name;
  }
}

TEST(Classify, ReferenceSpaces) {
  auto m = classify_strata(*fixtures::smooth_surface());
  EXPECT_EQ(m.regular, std::set<StratumId>{id("m:M")});
  EXPECT_TRUE(m.singular.empty());
  EXPECT_EQ(m.minimal, std::set<StratumId>{id("m:M")});

  auto c = classify_strata(*fixtures::cone_circle());
  EXPECT_EQ(c.regular, std::set<StratumId>{id("c/m:S1")});
  EXPECT_EQ(c.singular, std::set<StratumId>{id("v")});
  EXPECT_EQ(c.minimal, std::set<StratumId>{id("v")});

  auto s = classify_strata(*fixtures::sigma_circle());
  EXPECT_EQ(s.minimal, (std::set<StratumId>{id("p+"), id("p-")}));
}

TEST(Classify, AgreesWithPosetExtremaOnCorpus) {
  for (const auto& [name, x] : fixtures::generate_corpus(11, 60)) {
    auto cl = classify_strata(*x);
    EXPECT_EQ(cl.minimal, oracle::minima(*x)) << name;
    std::set<StratumId> top;
    for (const auto& s : oracle::maxima(*x)) {
      if (x->stratum(s).dim == x->dim()) top.insert(s);
    }
    EXPECT_EQ(cl.regular, top) << name;
    // A minimal stratum is singular unless it is a whole smooth component.
    auto tops = oracle::maxima(*x);
    for (const auto& s : cl.minimal) {
      if (!tops.count(s)) EXPECT_TRUE(cl.singular.count(s)) << name;
    }
  }
}

TEST(PosetQuery, Cone) {
  auto c = fixtures::cone_circle();
  auto v = poset_query(*c, id("v"));
  EXPECT_EQ(v.closure, std::set<StratumId>{id("v")});
  EXPECT_EQ(v.incidence_neighborhood, (std::set<StratumId>{id("v"), id("c/m:S1")}));
  auto b = poset_query(*c, id("c/m:S1"));
  EXPECT_EQ(b.closure, (std::set<StratumId>{id("v"), id("c/m:S1")}));
  EXPECT_EQ(b.incidence_neighborhood, std::set<StratumId>{id("c/m:S1")});
}

TEST(PosetQuery, DisjointConesStayApart) {
  auto p = fixtures::cone_pair();
  auto q = poset_query(*p, id("d:0/v"));
  EXPECT_EQ(q.incidence_neighborhood, (std::set<StratumId>{id("d:0/v"), id("d:0/c/m:S1")}));
}

TEST(PosetQuery, UnknownStratum) {
  try {
    poset_query(*fixtures::cone_circle(), id("nope"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownStratum);
  }
}

TEST(PosetQuery, ClosureMeetsNeighborhoodInItself) {
  for (const auto& [name, x] : fixtures::generate_corpus(3, 40)) {
    for (const auto& s : x->strata()) {
      auto q = poset_query(*x, s.id);
      EXPECT_EQ(q.closure, oracle::below(*x, s.id)) << name;
      EXPECT_EQ(q.incidence_neighborhood, oracle::above(*x, s.id)) << name;
      std::set<StratumId> meet;
      for (const auto& t : q.closure) {
        if (q.incidence_neighborhood.count(t)) meet.insert(t);
      }
      EXPECT_EQ(meet, std::set<StratumId>{s.id}) << name;
    }
  }
}

TEST(Validate, GeneratedSpacesAreClean) {
  for (const auto& [name, x] : fixtures::generate_corpus(1, 200)) {
    auto r = validate_pseudomanifold(*x);
    EXPECT_TRUE(r.ok()) << name << ": " << (r.ok() ? "" : r.violations.front().code);
  }
}

TEST(Validate, NonCompactLink) {
  auto p = hand_cone(present(E::smooth("R", 1, false)), 2);
  auto r = validate_pseudomanifold(*p);
  ASSERT_TRUE(r.has("LinkNotCompact"));
  EXPECT_EQ(r.violations.front().strata, std::vector<StratumId>{id("v")});
}

TEST(Validate, LinkLengthMustDrop) {
  auto p = hand_cone(fixtures::sigma_circle(), 2);
  EXPECT_TRUE(validate_pseudomanifold(*p).has("LinkLengthNotDecreasing"));
}

TEST(Validate, LeqCycle) {
  StratumId a({"a"});
  StratumId b({"b"});
  PresentedSpace p({{a, 1, "a", 8}, {b, 1, "b", 8}}, {{a, a}, {b, b}, {a, b}, {b, a}}, {}, {}, true);
  EXPECT_TRUE(validate_pseudomanifold(p).has("NotAPartialOrder"));
}

TEST(Localize, OwnChainIsIdentity) {
  auto c = fixtures::cone_circle();
  auto l = localize(*c, {id("v"), id("c/m:S1")});
  EXPECT_EQ(l->size(), 2u);
  EXPECT_TRUE(iso_check(*l, *c).has_value());
}

TEST(Localize, FirstOfTwoCones) {
  auto p = fixtures::cone_pair();
  auto l = localize(*p, {id("d:0/v"), id("d:0/c/m:S1")});
  EXPECT_EQ(l->size(), 2u);
  EXPECT_TRUE(l->contains(id("d:0/v")));
  EXPECT_FALSE(l->contains(id("d:1/v")));
}

TEST(Localize, SuspensionPole) {
  auto s = fixtures::sigma_circle();
  auto l = localize(*s, {id("p+"), id("s/m:N")});
  EXPECT_EQ(l->size(), 2u);
  EXPECT_TRUE(l->lt(id("p+"), id("s/m:N")));
  EXPECT_TRUE(l->localized());
}

TEST(Localize, RejectsNonChain) {
  auto s = fixtures::sigma_circle();
  try {
    localize(*s, {id("p+"), id("p-")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAChain);
  }
}

TEST(IsoCheck, ReflexiveAndSymmetricOnCorpus) {
  auto corpus = fixtures::generate_corpus(5, 30);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& x = *corpus[i].space;
    auto w = iso_check(x, x);
    ASSERT_TRUE(w.has_value()) << corpus[i].name;
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      const auto& y = *corpus[j].space;
      auto a = iso_check(x, y).has_value();
      EXPECT_EQ(a, iso_check(y, x).has_value());
      if (a) EXPECT_EQ(length(x), length(y));
    }
  }
}

TEST(IsoCheck, ConeIsNotAProduct) {
  EXPECT_FALSE(iso_check(*fixtures::cone_circle(), *fixtures::line_times_cone()).has_value());
  EXPECT_FALSE(iso_check(*fixtures::cone_circle(), *fixtures::smooth_surface()).has_value());
}

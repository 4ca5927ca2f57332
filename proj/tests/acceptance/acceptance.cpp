// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stratcalc/fixtures.hpp"
#include "stratcalc/io.hpp"
#include "stratcalc/unbend.hpp"
#include "stratcalc/unfold.hpp"

using namespace stratcalc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr int kCorpusSize = 200;
constexpr double kLengthBudgetSeconds = 10.0;
constexpr double kUniquenessBudgetSeconds = 1.0;
constexpr std::size_t kMinComposablePairs = 20;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const std::vector<fixtures::NamedSpace>& corpus() {
  static const auto c = fixtures::generate_corpus(kSeed, kCorpusSize, 1, 4, 12);
  return c;
}

std::vector<fixtures::NamedSpace> corpus_and_references() {
  auto all = corpus();
  for (auto& r : fixtures::reference_spaces()) all.push_back(r);
  return all;
}

std::vector<fixtures::NamedSpace> fixture_spaces() {
  auto all = fixtures::reference_spaces();
  all.push_back({"line-cone", fixtures::line_times_cone()});
  all.push_back({"sigma", fixtures::sigma_circle()});
  all.push_back({"cone-pair", fixtures::cone_pair()});
  all.push_back({"bundle", fixtures::twisted_bundle()});
  return all;
}

BasicModel cone_model(const PresentedSpace& x, const StratumId& s) { return {x.stratum(s).dim, x.link(s), false}; }

/// Thom-Mather morphisms of the fixture set, plus identities of part of the corpus.
std::vector<StratMorphism> tm_morphisms() {
  auto cone = fixtures::cone_circle();
  auto cone2 = fixtures::cone_sigma();
  auto bundle = fixtures::twisted_bundle();
  const StratumId v = oracle::id("v");
  std::vector<StratMorphism> out;
  for (int k : {1, 2, 3, 5}) {
    auto f = fixtures::link_rotation(cone, v, k);
    f.name = "rot" + std::to_string(k);
    out.push_back(f);
  }
  auto id = identity_morphism(cone);
  id.name = "id-cone";
  out.push_back(id);
  auto embed = fixtures::cone_embedding(cone, cone2);
  embed.name = "embed";
  out.push_back(embed);
  auto spin = fixtures::link_rotation(cone2, v, 4);
  spin.name = "spin";
  out.push_back(spin);
  auto swap = fixtures::pole_swap(fixtures::sigma_circle());
  swap.name = "pole-swap";
  out.push_back(swap);
  auto twist = fixtures::bundle_twist(bundle);
  twist.name = "twist";
  out.push_back(twist);
  auto untwist = inverse_isomorphism(twist);
  untwist.name = "untwist";
  out.push_back(untwist);
  auto line = fixtures::line_times_cone();
  auto turn = fixtures::link_rotation(line, oracle::id("x:U/v"), 2);
  turn.name = "turn";
  out.push_back(turn);
  for (int i = 0; i < 20; ++i) {
    const auto& [name, x] = corpus()[static_cast<std::size_t>(i)];
    auto f = identity_morphism(x);
    f.name = "id-" + name;
    out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome length_decrement() {
  Outcome o;
  std::set<int> lengths;
  auto t0 = Clock::now();
  for (const auto& [name, x] : corpus()) {
    const int p = oracle::longest_chain(*x);
    lengths.insert(p);
    if (x->size() > 12) o.fail(name + " has more than 12 strata");
    if (!validate_tm(*x).ok()) o.fail(name + " is not a valid Thom-Mather space");
    auto r = unbend_space(x);
    const int q = oracle::longest_chain(*r.unbent);
    if (q != p - 1) o.fail(name + ": length " + std::to_string(p) + " -> " + std::to_string(q));
  }
  const double dt = seconds_since(t0);
  if (corpus().size() < kCorpusSize) o.fail("corpus too small");
  if (lengths != std::set<int>{1, 2, 3, 4}) o.fail("corpus does not cover lengths 1..4");
  if (dt >= kLengthBudgetSeconds) o.fail("took " + fmt(dt) + " s");
  if (o.pass) o.detail = std::to_string(corpus().size()) + " spaces, lengths 1-4, " + fmt(dt) + " s";
  return o;
}

Outcome termination() {
  Outcome o;
  int members = 0;
  for (const auto& [name, x] : corpus_and_references()) {
    auto u = unfold_space(x);
    const int p = oracle::longest_chain(*x);
    if (u->steps() != p) o.fail(name + ": " + std::to_string(u->steps()) + " steps for length " + std::to_string(p));
    if (oracle::longest_chain(*u->final) != 0) o.fail(name + ": final space has incidences");
    if (!classify_strata(*u->final).singular.empty()) o.fail(name + ": final singular part not empty");
    if (!u->final->links().empty() || !u->final->tm().tubes.empty()) o.fail(name + ": final space keeps links");
    ++members;
  }
  if (o.pass) o.detail = std::to_string(members) + " spaces reach a manifold in exactly p steps";
  return o;
}

Outcome double_cover() {
  Outcome o;
  for (const auto& [name, x] : corpus()) {
    auto r = unbend_space(x);
    if (!check_double_cover(r).ok()) o.fail(name + ": check_double_cover");
    std::set<StratumId> removed;
    for (const auto& s : oracle::minima(*x)) {
      if (!oracle::maxima(*x).count(s)) removed.insert(s);
    }
    std::map<StratumId, std::multiset<ProvKind>> copies;
    std::map<StratumId, std::multiset<StratumId>> fibers;
    for (const auto& [piece, tags] : r.map.provenance) {
      if (!r.unbent->contains(piece)) o.fail(name + ": provenance on unknown piece " + piece.str());
      for (const auto& t : tags) {
        if (t.kind == ProvKind::TubeFiber) fibers[t.target].insert(t.link_stratum.value_or(StratumId{}));
        else copies[t.target].insert(t.kind);
      }
    }
    for (const auto& s : x->strata()) {
      if (removed.count(s.id)) {
        std::multiset<StratumId> expected;
        for (const auto& q : x->link(s.id)->strata()) expected.insert(q.id);
        if (fibers[s.id] != expected) o.fail(name + ": fiber pieces over " + s.id.str());
        if (copies.count(s.id)) o.fail(name + ": copies over removed " + s.id.str());
      } else if (copies[s.id] != std::multiset<ProvKind>{ProvKind::CopyPlus, ProvKind::CopyMinus}) {
        o.fail(name + ": tags over " + s.id.str() + " are not {+,-}");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(corpus().size()) + " unbendings";
  return o;
}

Outcome basic_model() {
  Outcome o;
  using E = StratSpaceExpr;
  const E circle = E::smooth("S1", 1, true);
  const E sigma = E::suspension(E::smooth("N", 1, true));
  struct Case {
    E model;
    E normal;
  };
  std::vector<Case> cases{
      {E::product({"U", 1, false}, E::cone(circle)), E::product({"U", 1, false}, E::product({"T", 1, false}, circle))},
      {E::product({"U", 2, false}, E::cone(circle)), E::product({"U", 2, false}, E::product({"T", 1, false}, circle))},
      {E::product({"U", 1, false}, E::cone(sigma)), E::product({"U", 1, false}, E::product({"T", 1, false}, sigma))},
      {E::cone(sigma), E::product({"T", 1, false}, sigma)},
  };
  int points = 0;
  for (const auto& c : cases) {
    auto x = present(c.model);
    auto r = unbend_space(x);
    if (!iso_check(*r.unbent, *present(c.normal))) o.fail("unbending of " + x->strata().front().id.str() + " is not U x L x R");
    for (const auto& sq : r.map.chart_squares) {
      for (const auto& p : model_grid(sq.top)) {
        ModelPoint flipped = p;
        flipped.r = -p.r;
        auto a = eval_basic(sq.c, p);
        auto b = eval_basic(sq.c, flipped);
        if (!same_cone_point(a, b, 0.0)) o.fail("c^ is not even at t=" + fmt(p.r));
        if (p.r == -0.5) {
          ModelPoint want{p.u, p.l, 0.5};
          if (!same_cone_point(a, want, 0.0) || a.l != p.l) o.fail("c^(u,l,-0.5) != (u,[l,0.5])");
        }
        ++points;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(cases.size()) + " models, " + std::to_string(points) + " grid points, exact";
  return o;
}

Outcome radium_law() {
  Outcome o;
  int points = 0;
  auto spaces = corpus_and_references();
  for (auto& f : fixture_spaces()) spaces.push_back(f);
  for (const auto& [name, x] : spaces) {
    auto r = unbend_space(x);
    if (!check_unbending_is_tm(r).ok()) o.fail(name + ": check_unbending_is_tm");
    for (const auto& ut : r.tubes) {
      const ChartSquare* sq = nullptr;
      for (const auto& s : r.map.chart_squares) {
        if (s.base == ut.base) sq = &s;
      }
      if (!sq) {
        o.fail(name + ": no chart square over " + ut.base.str());
        continue;
      }
      for (const auto& p : model_grid(sq->top)) {
        Env env{p.u, p.l, p.r};
        // rho of the image point in the cone chart is its radial coordinate.
        const double rho = eval_basic(sq->c, p).r;
        if (std::abs(ut.signed_radium.eval_real(env)) != rho) o.fail(name + ": |rho^| != rho at t=" + fmt(p.r));
        if (rho != std::abs(p.r)) o.fail(name + ": rho(c^(u,l,t)) != |t|");
        ++points;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(points) + " tube grid points, exact";
  return o;
}

Outcome cocycle_lift() {
  Outcome o;
  int maps = 0;
  int squares = 0;
  for (const auto& [name, x] : fixture_spaces()) {
    for (const auto& [base, tube] : x->tm().tubes) {
      BasicModel model = cone_model(*x, base);
      std::vector<LinkMap> elements = tube.group.elements;
      for (int k = 1; k < static_cast<int>(model.link->samples(model.link->strata().front().id).size()); ++k) {
        elements.push_back(rotation_map(*model.link, k, "rot" + std::to_string(k)));
      }
      for (const auto& g : elements) {
        if (!validate_automorphism(*model.link, g).ok()) continue;
        BasicMorphism f = cocycle_basic(model, g);
        auto lifted = lift_basic_morphism(f, 1);
        ++maps;
        const auto& pr = lifted.parity;
        if (!pr.vertex_ok || !pr.parity_ok || !pr.smooth_ok) {
          o.fail(name + "/" + g.name + ": parity conditions (" + pr.parity + ")");
        }
        for (const auto& p : model_grid(lifted.map.domain)) {
          auto q = eval_basic(lifted.map, p);
          ModelPoint want{p.u, g.apply(p.l), p.r};
          if (!same_cylinder_point(q, want, kTol)) o.fail(name + "/" + g.name + ": lift is not (u, g(l), t)");
        }
        for (const auto& h : tube.group.elements) {
          BasicMorphism phi = cocycle_basic(model, h);
          BasicMorphism f2 = conjugate(f, h, h);
          if (!check_cocycle_square(f, f2, phi, phi)) o.fail(name + ": conjugated square for " + g.name);
          auto lf2 = lift_basic_morphism(f2, 1).map;
          auto lphi = lift_basic_morphism(phi, 1).map;
          if (!check_cocycle_square(lifted.map, lf2, lphi, lphi)) {
            o.fail(name + ": lifted conjugated square for " + g.name);
          }
          squares += 2;
        }
      }
    }
  }
  auto bundle = fixtures::twisted_bundle();
  auto twist = fixtures::bundle_twist(bundle);
  auto ub = unbend_space(bundle);
  auto lifted = lift_morphism(twist, ub, ub, 1);
  if (!check_lift_square(twist, lifted.lifted, ub, ub).ok()) o.fail("bundle twist lift square");
  if (o.pass) o.detail = std::to_string(maps) + " cocycle maps, " + std::to_string(squares) + " squares";
  return o;
}

Outcome functor_laws() {
  Outcome o;
  auto morphisms = tm_morphisms();
  std::vector<HarnessSpace> spaces;
  for (const auto& [name, x] : fixture_spaces()) spaces.push_back({name, x});
  for (int i = 0; i < 40; ++i) spaces.push_back({corpus()[i].name, corpus()[i].space});
  auto report = functor_harness(spaces, morphisms);
  for (const auto& r : report.outcomes) {
    if (!r.pass) o.fail(r.law + " " + r.subject + ": " + r.detail);
  }
  if (!report.excluded.empty()) o.fail(report.excluded.front().first + " excluded");
  const std::size_t pairs = report.count("composition");
  if (pairs < kMinComposablePairs) o.fail("only " + std::to_string(pairs) + " composable pairs");

  // One unbending step, both signs of the identity.
  std::size_t one_step = 0;
  for (const auto& f : morphisms) {
    auto ux = unbend_space(f.domain);
    auto uy = unbend_space(f.codomain);
    auto lid = lift_morphism(identity_morphism(f.domain), ux, ux, 1).lifted;
    if (auto d = morphism_difference(lid, unbent_identity(ux))) o.fail("lift(id) for " + f.name + ": " + *d);
    auto lf = lift_morphism(f, ux, uy, 1).lifted;
    for (const auto& g : morphisms) {
      if (!structurally_equal(*f.codomain, *g.domain)) continue;
      auto uz = unbend_space(g.codomain);
      auto lg = lift_morphism(g, uy, uz, 1).lifted;
      auto lgf = lift_morphism(compose(g, f), ux, uz, 1).lifted;
      if (auto d = morphism_difference(lgf, compose(lg, lf), {}, 2 * kTol)) {
        o.fail("lift(" + g.name + "*" + f.name + "): " + *d);
      }
      ++one_step;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(report.count("identity")) + " identities, " + std::to_string(pairs) +
               " composable pairs (unfolding), " + std::to_string(one_step) + " (one step)";
  }
  return o;
}

Outcome uniqueness() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, x] : corpus_and_references()) {
    auto t0 = Clock::now();
    auto a = unbend_space(x);
    auto b = unbend_space(x, {true});
    if (!iso_check(*a.unbent, *b.unbent)) o.fail(name + ": unbendings not isomorphic");
    auto ua = unfold_space(x);
    auto ub = unfold_space(x, {true});
    if (ua->steps() != ub->steps()) o.fail(name + ": step counts differ");
    for (int k = 0; k < std::min(ua->steps(), ub->steps()); ++k) {
      if (!iso_check(*ua->trace[k].unbent, *ub->trace[k].unbent)) o.fail(name + ": step " + std::to_string(k + 1));
    }
    if (!iso_check(*ua->final, *ub->final)) o.fail(name + ": unfoldings not isomorphic");
    const double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    if (dt >= kUniquenessBudgetSeconds) o.fail(name + ": witness took " + fmt(dt) + " s");
  }
  if (o.pass) o.detail = "witness found for every member, slowest " + fmt(worst) + " s";
  return o;
}

Outcome commuting_squares() {
  Outcome o;
  std::size_t unbendable = 0;
  std::size_t unfoldable = 0;
  std::size_t lifted = 0;
  auto spaces = corpus_and_references();
  for (auto& f : fixture_spaces()) spaces.push_back(f);
  for (const auto& [name, x] : spaces) {
    auto u = unfold_space(x);
    for (const auto& step : u->trace) {
      if (auto r = check_chart_squares(step); !r.ok()) o.fail(name + ": " + r.violations.front().code);
      unbendable += step.map.chart_squares.size();
    }
    for (const auto& sq : u->chart_squares) {
      auto lu = u->link_unfoldings.at(sq.base);
      if (auto r = check_unfoldable_square(*x, sq, *lu); !r.ok()) {
        o.fail(name + ": unfoldable square over " + sq.base.str() + ": " + r.violations.front().code);
      }
      ++unfoldable;
    }
  }
  for (const auto& f : tm_morphisms()) {
    auto ux = unbend_space(f.domain);
    auto uy = unbend_space(f.codomain);
    for (int sign : {1, -1}) {
      auto l = lift_morphism(f, ux, uy, sign);
      if (auto r = check_lift_square(f, l.lifted, ux, uy); !r.ok()) o.fail(f.name + ": lift square");
      ++lifted;
    }
    auto fx = unfold_space(f.domain);
    auto fy = unfold_space(f.codomain);
    auto l = lift_to_unfolding(f, *fx, *fy);
    if (auto r = check_unfolded_squares(f, l, *fx, *fy); !r.ok()) o.fail(f.name + ": unfolded lift squares");
    lifted += l.steps.size();
  }
  if (o.pass) {
    o.detail = std::to_string(unbendable) + " unbendable, " + std::to_string(unfoldable) + " unfoldable, " +
               std::to_string(lifted) + " lifted squares";
  }
  return o;
}

Outcome fault_detection() {
  Outcome o;
  const fs::path dir = STRATCALC_FIXTURE_DIR;
  int caught = 0;
  auto expect = [&](bool detected, const std::string& fault) {
    if (detected) ++caught;
    else o.fail(fault + " passed undetected");
  };

  // Corrupted provenance: a missing copy tag and a fiber piece over the wrong link stratum.
  {
    auto r = unbend_space(fixtures::cone_sigma());
    expect(check_double_cover(r).ok(), "clean unbending flagged");
    auto bad = r;
    for (auto& [piece, tags] : bad.map.provenance) {
      std::erase_if(tags, [](const ProvTag& t) { return t.kind == ProvKind::CopyMinus; });
    }
    expect(check_double_cover(bad).has("DoubleCoverBroken"), "dropped copy tag");
    bad = r;
    for (auto& [piece, tags] : bad.map.provenance) {
      for (auto& t : tags) {
        if (t.kind == ProvKind::TubeFiber) t.link_stratum = oracle::id("m:ghost");
      }
    }
    expect(check_double_cover(bad).has("FiberPreimageMismatch"), "misplaced fiber tag");
    bad = r;
    bad.map.provenance.begin()->second.front().target = oracle::id("nowhere");
    expect(check_unbending_is_tm(bad).has("DanglingProvenance"), "dangling provenance");
  }
  // Broken radium sign: both halves on the same side, and c^ dropping the absolute value.
  {
    auto r = unbend_space(fixtures::cone_circle());
    expect(check_unbending_is_tm(r).ok(), "clean radium flagged");
    auto bad = r;
    bad.tubes.front().halves[1].t_sign = 1;
    expect(check_unbending_is_tm(bad).has("RadiumRelationBroken"), "halves with one sign");
    bad = r;
    bad.map.chart_squares.front().c.a3 = Expr::r();
    expect(check_unbending_is_tm(bad).has("RadiumRelationBroken"), "signed radius in c^");
  }
  // Non Thom-Mather morphism.
  {
    auto f = io::parse_morphism(io::read_file(dir / "nontm.morph"));
    auto report = validate_morphism(f);
    expect(!report.ok(), "non-TM morphism");
    auto h = functor_harness({}, {f});
    expect(h.excluded.size() == 1 && h.excluded.front().second == "NotThomMather", "non-TM morphism in harness");
    auto line = fixtures::line_times_cone();
    expect(validate_morphism(fixtures::link_rotation(line, oracle::id("x:U/v"), 1)).ok(), "clean morphism flagged");
  }
  // Mather violation.
  {
    auto x = io::parse_space(io::read_file(dir / "broken.space")).space;
    expect(validate_tm(*x).has("MatherViolation"), "Mather violation");
    expect(validate_tm(*fixtures::sigma_circle()).ok(), "clean sigma flagged");
    try {
      unbend_space(x);
      o.fail("unbending accepted a Mather violation");
    } catch (const Error& e) {
      expect(e.code() == ErrorCode::InvalidInput, "unbending error code");
    }
  }
  // Non-compact link: in a document, in an expression, and in a hand-built presentation.
  {
    try {
      io::parse_space(io::read_file(dir / "noncompact.space"));
      o.fail("non-compact link document accepted");
    } catch (const io::ParseError& e) {
      expect(e.code() == ErrorCode::SchemaError && e.rule() == "cone-requires-compact", "non-compact link rule");
    }
    try {
      present(StratSpaceExpr::cone(StratSpaceExpr::smooth("R", 1, false)));
      o.fail("cone over a non-compact space presented");
    } catch (const Error& e) {
      expect(e.code() == ErrorCode::ConeOverNonCompact, "ConeOverNonCompact");
    }
    auto cone = fixtures::cone_circle();
    auto open_link = present(StratSpaceExpr::smooth("S1", 1, false));
    std::vector<std::pair<StratumId, StratumId>> leq = cone->leq_pairs();
    auto bad = std::make_shared<PresentedSpace>(cone->strata(), leq,
                                                std::map<StratumId, SpacePtr>{{oracle::id("v"), open_link}},
                                                cone->tm(), cone->compact());
    expect(validate_pseudomanifold(*bad).has("LinkNotCompact"), "non-compact link in presentation");
  }
  if (o.pass) o.detail = std::to_string(caught) + " detections, no false passes";
  return o;
}

Outcome serialization() {
  Outcome o;
  const fs::path fixture_dir = STRATCALC_FIXTURE_DIR;
  const fs::path golden_dir = STRATCALC_GOLDEN_DIR;
  const fs::path corpus_dir = STRATCALC_CORPUS_DIR;
  const std::set<std::string> faulty{"noncompact.space", "cycle.space"};
  int files = 0;
  for (const auto& dir : {fixture_dir, corpus_dir}) {
    for (const auto& e : fs::directory_iterator(dir)) {
      const auto path = e.path();
      if (faulty.count(path.filename().string())) continue;
      std::string text = io::read_file(path);
      std::string again;
      if (path.extension() == ".space") {
        auto doc = io::parse_space(text);
        again = io::write_space(doc);
        if (io::write_space(*io::parse_space(io::write_space(*doc.space)).space) != io::write_space(*doc.space)) {
          o.fail(path.filename().string() + ": presented form not stable");
        }
      } else if (path.extension() == ".morph") {
        again = io::write_morphism(io::parse_morphism(text));
      } else {
        continue;
      }
      if (again != text) o.fail(path.filename().string() + ": bytes changed on round trip");
      ++files;
    }
  }
  for (const auto& [name, x] : corpus()) {
    auto text = io::write_space(*x);
    if (io::write_space(*io::parse_space(text).space) != text) o.fail(name + ": generated space not stable");
  }
  auto cone = io::parse_space(io::read_file(fixture_dir / "cone.space")).space;
  if (io::write_unbending(unbend_space(cone)) != io::read_file(golden_dir / "unbend_cone.unbend")) {
    o.fail("unbend(Cone(S1)) differs from golden");
  }
  auto cone2 = io::parse_space(io::read_file(fixture_dir / "cone2.space")).space;
  if (io::write_unfolding(*unfold_space(cone2)) != io::read_file(golden_dir / "unfold_cone2.unfold")) {
    o.fail("unfold(Cone(sigma N)) differs from golden");
  }
  if (o.pass) o.detail = std::to_string(files) + " files and " + std::to_string(corpus().size()) + " generated spaces; 2 goldens";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"length-decrement", length_decrement}, {"termination-and-flatness", termination},
      {"double-cover", double_cover},         {"basic-model", basic_model},
      {"radium", radium_law},                 {"cocycle-lift", cocycle_lift},
      {"functor-laws", functor_laws},         {"uniqueness", uniqueness},
      {"commuting-squares", commuting_squares}, {"fault-detection", fault_detection},
      {"serialization", serialization},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}

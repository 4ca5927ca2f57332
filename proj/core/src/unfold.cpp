#include "stratcalc/unfold.hpp"

#include <algorithm>
#include <cmath>

#include "stratcalc/error.hpp"

namespace stratcalc {

namespace {

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && structurally_equal(*a, *b));
}

char letter(ProvKind k) {
  switch (k) {
    case ProvKind::CopyPlus: return '+';
    case ProvKind::CopyMinus: return '-';
    case ProvKind::TubeFiber: return 'f';
    case ProvKind::Identity: return '=';
  }
  return '?';
}

using Memo = std::map<const PresentedSpace*, UnfoldPtr>;

CompositeMap compose_provenance(const SpacePtr& source, const std::vector<UnbendResult>& trace) {
  CompositeMap out;
  out.target = source;
  out.source = trace.empty() ? source : trace.back().unbent;
  // level k holds the words from strata of X^k down to X^0
  std::map<StratumId, std::vector<SignWord>> level;
  for (const auto& s : source->strata()) level[s.id] = {{s.id, ""}};
  for (const auto& step : trace) {
    std::map<StratumId, std::vector<SignWord>> next;
    for (const auto& [id, tags] : step.map.provenance) {
      auto& words = next[id];
      for (const auto& tag : tags) {
        for (const auto& w : level.at(tag.target)) words.push_back({w.target, w.word + letter(tag.kind)});
      }
      std::sort(words.begin(), words.end());
      words.erase(std::unique(words.begin(), words.end()), words.end());
    }
    level = std::move(next);
  }
  out.provenance = std::move(level);
  return out;
}

UnfoldPtr unfold_impl(const SpacePtr& space, const UnfoldOptions& options, Memo& memo) {
  if (auto it = memo.find(space.get()); it != memo.end()) return it->second;
  auto out = std::make_shared<UnfoldResult>();
  out->source = space;
  SpacePtr cur = space;
  const int p = length(*space);
  for (int k = 0; k < p; ++k) {
    out->trace.push_back(unbend_space(cur, {options.reverse_order}));
    cur = out->trace.back().unbent;
  }
  if (length(*cur) != 0) throw Error(ErrorCode::InvalidInput, "unfolding did not reach length 0");
  out->final = cur;
  out->composite = compose_provenance(space, out->trace);
  for (const auto& s : classify_strata(*space).singular) {
    auto link = space->link(s);
    if (!link) continue;
    auto lu = unfold_impl(link, options, memo);
    out->link_unfoldings.emplace(s, lu);
    out->chart_squares.push_back(unfoldable_chart(*space, s, lu));
  }
  memo.emplace(space.get(), out);
  return out;
}

}  // namespace

std::set<std::string> CompositeMap::sign_words(const StratumId& s) const {
  std::set<std::string> out;
  for (const auto& [_, words] : provenance) {
    for (const auto& w : words) {
      if (w.target != s) continue;
      if (std::all_of(w.word.begin(), w.word.end(), [](char c) { return c == '+' || c == '-'; })) {
        out.insert(w.word);
      }
    }
  }
  return out;
}

UnfoldPtr unfold_space(const SpacePtr& space, const UnfoldOptions& options) {
  if (!space) throw Error(ErrorCode::InvalidInput, "no space");
  Memo memo;
  return unfold_impl(space, options, memo);
}

LinkSample project_sample(const UnfoldResult& u, const LinkSample& s) {
  LinkSample cur = s;
  for (int k = u.steps() - 1; k >= 0; --k) cur = u.trace[k].map.project_sample(cur).first;
  return cur;
}

LinkMap link_projection(const UnfoldResult& lu, const std::vector<int>& order) {
  std::vector<int> steps = order;
  if (steps.empty()) {
    for (int k = lu.steps() - 1; k >= 0; --k) steps.push_back(k);
  }
  LinkMap nu;
  nu.name = "nu";
  for (const auto& s : lu.final->samples()) {
    LinkSample cur = s;
    try {
      for (int k : steps) cur = lu.trace.at(k).map.project_sample(cur).first;
    } catch (const Error&) {
      continue;  // left untabulated; the square check reports it
    }
    nu.samples.emplace(s, cur);
    nu.strata.emplace(s.stratum, cur.stratum);
  }
  return nu;
}

ChartSquare unfoldable_chart(const PresentedSpace& space, const StratumId& s, const UnfoldPtr& lu) {
  auto link = space.link(s);
  if (!link) throw Error(ErrorCode::InvalidInput, s.str() + " has no link");
  if (!lu || !same_space(lu->source, link)) throw Error(ErrorCode::MissingLinkUnfolding, s.str());
  const int dim = space.stratum(s).dim;
  ChartSquare sq;
  sq.base = s;
  if (const Tube* t = space.tube(s); t && !t->charts.empty()) sq.chart = t->charts.front().id;
  sq.bottom = {dim, link, false};
  sq.top = {dim, lu->final, true};
  sq.c = identity_basic(sq.bottom);
  sq.c.name = "c~";
  sq.c.domain = sq.top;
  sq.c.a3 = Expr::abs(Expr::r());
  LinkMap nu;
  if (lu->steps() > 0) {
    nu = link_projection(*lu);
    sq.c.a2 = Expr::apply(nu, Expr::l());
  } else {
    nu = identity_map(*link, "id");
  }
  if (const Tube* t = space.tube(s)) {
    for (const auto& [q, q0] : nu.strata) {
      if (auto it = t->fiber.find(q0); it != t->fiber.end()) sq.top_strata.emplace(q, it->second);
    }
  }
  return sq;
}

Report check_unfoldable_square(const PresentedSpace& space, const ChartSquare& square, const UnfoldResult& lu,
                               const GridSpec& grid) {
  Report report;
  const Tube* tube = space.tube(square.base);
  if (!tube) {
    report.add("ChartSquareBroken", {square.base}, "no tube");
    return report;
  }
  for (const auto& p : model_grid(square.top, grid)) {
    std::string where = to_string(p.l) + ", t=" + std::to_string(p.r);
    try {
      ModelPoint a = eval_basic(square.c, p);
      ModelPoint b{p.u, project_sample(lu, p.l), std::abs(p.r)};
      if (!same_cone_point(a, b)) {
        report.add("ChartSquareBroken", {square.base}, "values differ at " + where);
        break;
      }
      if (a.r > 0.0) {
        auto chart = tube->fiber.find(a.l.stratum);
        auto top = square.top_strata.find(p.l.stratum);
        if (chart == tube->fiber.end() || top == square.top_strata.end() || chart->second != top->second) {
          report.add("ChartSquareBroken", {square.base}, "strata differ at " + where);
          break;
        }
      }
    } catch (const Error& e) {
      report.add("ChartSquareBroken", {square.base}, std::string(to_string(e.code())) + " at " + where);
      break;
    }
  }
  return report;
}

UnfoldedMorphism lift_to_unfolding(const StratMorphism& f, const UnfoldResult& from, const UnfoldResult& to,
                                   const GridSpec& grid, int min_steps) {
  const int n = std::max({from.steps(), to.steps(), min_steps});
  UnbendResult pad_from = unbend_space(from.final);
  UnbendResult pad_to = unbend_space(to.final);
  UnfoldedMorphism out;
  StratMorphism cur = f;
  for (int k = 0; k < n; ++k) {
    const UnbendResult& a = k < from.steps() ? from.trace[k] : pad_from;
    const UnbendResult& b = k < to.steps() ? to.trace[k] : pad_to;
    LiftResult r = lift_morphism(cur, a, b, 1, grid);
    out.parity.insert(out.parity.end(), r.parity.begin(), r.parity.end());
    out.steps.push_back(r.lifted);
    cur = std::move(r.lifted);
  }
  out.final = cur;
  return out;
}

Report check_unfolded_squares(const StratMorphism& f, const UnfoldedMorphism& lifted, const UnfoldResult& from,
                              const UnfoldResult& to, const GridSpec& grid) {
  Report report;
  UnbendResult pad_from = unbend_space(from.final);
  UnbendResult pad_to = unbend_space(to.final);
  const StratMorphism* below = &f;
  for (std::size_t k = 0; k < lifted.steps.size(); ++k) {
    const int i = static_cast<int>(k);
    const UnbendResult& a = i < from.steps() ? from.trace[k] : pad_from;
    const UnbendResult& b = i < to.steps() ? to.trace[k] : pad_to;
    report.merge(check_lift_square(*below, lifted.steps[k], a, b, grid), "step " + std::to_string(k + 1));
    below = &lifted.steps[k];
  }
  return report;
}

StratMorphism unfolded_identity(const UnfoldResult& u) {
  if (u.trace.empty()) return identity_morphism(u.final);
  return unbent_identity(u.trace.back());
}

// ---------------------------------------------------------------------------
// harness

bool HarnessReport::ok() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const LawOutcome& o) { return o.pass; });
}

std::size_t HarnessReport::count(const std::string& law) const {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [&](const LawOutcome& o) { return o.law == law; }));
}

namespace {

std::optional<std::string> steps_difference(const UnfoldedMorphism& a, const UnfoldedMorphism& b, double tol,
                                            const GridSpec& grid) {
  if (a.steps.size() != b.steps.size()) return "step counts differ";
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    if (auto d = morphism_difference(a.steps[k], b.steps[k], grid, tol)) {
      return "step " + std::to_string(k + 1) + ": " + *d;
    }
  }
  return morphism_difference(a.final, b.final, grid, tol);
}

UnfoldedMorphism compose_steps(const UnfoldedMorphism& g, const UnfoldedMorphism& f) {
  UnfoldedMorphism out;
  for (std::size_t k = 0; k < f.steps.size(); ++k) out.steps.push_back(compose(g.steps[k], f.steps[k]));
  out.final = compose(g.final, f.final);
  return out;
}

}  // namespace

HarnessReport functor_harness(const std::vector<HarnessSpace>& spaces, const std::vector<StratMorphism>& morphisms,
                              const GridSpec& grid) {
  HarnessReport report;
  std::map<const PresentedSpace*, UnfoldPtr> cache;
  auto unfolding = [&](const SpacePtr& x) {
    auto it = cache.find(x.get());
    if (it != cache.end()) return it->second;
    auto u = unfold_space(x);
    cache.emplace(x.get(), u);
    return u;
  };
  auto run = [&](const std::string& law, const std::string& subject, auto&& body) {
    LawOutcome o{law, subject, false, {}};
    try {
      std::optional<std::string> failure = body();
      o.pass = !failure;
      if (failure) o.detail = *failure;
    } catch (const Error& e) {
      o.detail = e.what();
    }
    report.outcomes.push_back(std::move(o));
  };

  for (const auto& [name, x] : spaces) {
    run("identity", name, [&]() -> std::optional<std::string> {
      auto u = unfolding(x);
      auto lifted = lift_to_unfolding(identity_morphism(x), *u, *u, grid);
      for (std::size_t k = 0; k < lifted.steps.size(); ++k) {
        if (auto d = morphism_difference(lifted.steps[k], unbent_identity(u->trace[k]), grid)) {
          return "step " + std::to_string(k + 1) + ": " + *d;
        }
      }
      return morphism_difference(lifted.final, unfolded_identity(*u), grid);
    });
    run("uniqueness", name, [&]() -> std::optional<std::string> {
      auto u = unfolding(x);
      auto r = unfold_space(x, {true});
      if (u->steps() != r->steps()) return "step counts differ";
      for (int k = 0; k < u->steps(); ++k) {
        if (!iso_check(*u->trace[k].unbent, *r->trace[k].unbent)) {
          return "no isomorphism after step " + std::to_string(k + 1);
        }
      }
      if (!iso_check(*u->final, *r->final)) return "final spaces are not isomorphic";
      return std::nullopt;
    });
  }

  std::vector<const StratMorphism*> admitted;
  for (const auto& f : morphisms) {
    if (!f.flags.thom_mather || !validate_morphism(f, grid).ok()) {
      report.excluded.emplace_back(f.name, "NotThomMather");
      continue;
    }
    admitted.push_back(&f);
  }
  for (const auto* f : admitted) {
    run("squares", f->name, [&]() -> std::optional<std::string> {
      auto from = unfolding(f->domain);
      auto to = unfolding(f->codomain);
      auto lifted = lift_to_unfolding(*f, *from, *to, grid);
      auto r = check_unfolded_squares(*f, lifted, *from, *to, grid);
      if (!r.ok()) return r.violations.front().code + ": " + r.violations.front().detail;
      return std::nullopt;
    });
  }
  for (const auto* f : admitted) {
    for (const auto* g : admitted) {
      if (!same_space(f->codomain, g->domain)) continue;
      run("composition", g->name + "*" + f->name, [&]() -> std::optional<std::string> {
        auto ux = unfolding(f->domain);
        auto uy = unfolding(f->codomain);
        auto uz = unfolding(g->codomain);
        const int n = std::max({ux->steps(), uy->steps(), uz->steps()});
        auto lf = lift_to_unfolding(*f, *ux, *uy, grid, n);
        auto lg = lift_to_unfolding(*g, *uy, *uz, grid, n);
        auto lgf = lift_to_unfolding(compose(*g, *f), *ux, *uz, grid, n);
        return steps_difference(lgf, compose_steps(lg, lf), 2 * kTol, grid);
      });
    }
  }
  return report;
}

}  // namespace stratcalc

#include "stratcalc/space.hpp"

#include <algorithm>
#include <functional>

#include "stratcalc/error.hpp"

namespace stratcalc {

// ---------------------------------------------------------------------------
// StratSpaceExpr

StratSpaceExpr StratSpaceExpr::smooth(std::string label, int dim, bool compact) {
  StratSpaceExpr e;
  e.kind_ = Kind::Smooth;
  e.manifold_ = {std::move(label), dim, compact};
  return e;
}

StratSpaceExpr StratSpaceExpr::product(SmoothSpec manifold, StratSpaceExpr space) {
  StratSpaceExpr e;
  e.kind_ = Kind::Product;
  e.manifold_ = std::move(manifold);
  e.args_.push_back(std::move(space));
  return e;
}

StratSpaceExpr StratSpaceExpr::cone(StratSpaceExpr link) {
  StratSpaceExpr e;
  e.kind_ = Kind::Cone;
  e.args_.push_back(std::move(link));
  return e;
}

StratSpaceExpr StratSpaceExpr::disjoint(std::vector<StratSpaceExpr> parts) {
  StratSpaceExpr e;
  e.kind_ = Kind::Disjoint;
  e.args_ = std::move(parts);
  return e;
}

StratSpaceExpr StratSpaceExpr::suspension(StratSpaceExpr base) {
  StratSpaceExpr e;
  e.kind_ = Kind::Suspension;
  e.args_.push_back(std::move(base));
  return e;
}

StratSpaceExpr StratSpaceExpr::given(SpacePtr space) {
  StratSpaceExpr e;
  e.kind_ = Kind::Given;
  e.given_ = std::move(space);
  return e;
}

bool StratSpaceExpr::operator==(const StratSpaceExpr& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Smooth: return manifold_ == other.manifold_;
    case Kind::Product: return manifold_ == other.manifold_ && args_ == other.args_;
    case Kind::Cone:
    case Kind::Disjoint:
    case Kind::Suspension: return args_ == other.args_;
    case Kind::Given:
      return given_ == other.given_ ||
             (given_ && other.given_ && structurally_equal(*given_, *other.given_));
  }
  return false;
}

// ---------------------------------------------------------------------------
// PresentedSpace

PresentedSpace::PresentedSpace(std::vector<Stratum> strata,
                               const std::vector<std::pair<StratumId, StratumId>>& leq,
                               std::map<StratumId, SpacePtr> links, TMStructure tm, bool compact,
                               bool localized)
    : strata_(std::move(strata)),
      links_(std::move(links)),
      tm_(std::move(tm)),
      compact_(compact),
      localized_(localized) {
  std::sort(strata_.begin(), strata_.end(),
            [](const Stratum& a, const Stratum& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < strata_.size(); ++i) {
    if (strata_[i].id == strata_[i - 1].id) {
      throw Error(ErrorCode::InvalidInput, "duplicate stratum id " + strata_[i].id.str());
    }
  }
  leq_.assign(strata_.size(), std::vector<bool>(strata_.size(), false));
  for (const auto& [a, b] : leq) {
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib) {
      throw Error(ErrorCode::UnknownStratum,
                  "incidence pair mentions unknown stratum " + (ia ? b.str() : a.str()));
    }
    leq_[*ia][*ib] = true;
  }
  for (const auto& s : strata_) dim_ = std::max(dim_, s.dim);
}

std::optional<std::size_t> PresentedSpace::index_of(const StratumId& id) const {
  auto it = std::lower_bound(strata_.begin(), strata_.end(), id,
                             [](const Stratum& s, const StratumId& key) { return s.id < key; });
  if (it == strata_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - strata_.begin());
}

const Stratum& PresentedSpace::stratum(const StratumId& id) const {
  auto i = index_of(id);
  if (!i) throw Error(ErrorCode::UnknownStratum, id.str());
  return strata_[*i];
}

bool PresentedSpace::leq(const StratumId& a, const StratumId& b) const {
  auto ia = index_of(a);
  auto ib = index_of(b);
  if (!ia) throw Error(ErrorCode::UnknownStratum, a.str());
  if (!ib) throw Error(ErrorCode::UnknownStratum, b.str());
  return leq_[*ia][*ib];
}

bool PresentedSpace::lt(const StratumId& a, const StratumId& b) const {
  return a != b && leq(a, b);
}

bool PresentedSpace::comparable(const StratumId& a, const StratumId& b) const {
  return leq(a, b) || leq(b, a);
}

std::vector<std::pair<StratumId, StratumId>> PresentedSpace::leq_pairs() const {
  std::vector<std::pair<StratumId, StratumId>> out;
  for (std::size_t i = 0; i < strata_.size(); ++i) {
    for (std::size_t j = 0; j < strata_.size(); ++j) {
      if (leq_[i][j]) out.emplace_back(strata_[i].id, strata_[j].id);
    }
  }
  return out;
}

SpacePtr PresentedSpace::link(const StratumId& id) const {
  auto it = links_.find(id);
  return it == links_.end() ? nullptr : it->second;
}

const Tube* PresentedSpace::tube(const StratumId& id) const {
  auto it = tm_.tubes.find(id);
  return it == tm_.tubes.end() ? nullptr : &it->second;
}

std::vector<LinkSample> PresentedSpace::samples() const {
  std::vector<LinkSample> out;
  for (const auto& s : strata_) {
    for (int i = 0; i < s.samples; ++i) out.push_back({s.id, i});
  }
  return out;
}

std::vector<LinkSample> PresentedSpace::samples(const StratumId& id) const {
  const auto& s = stratum(id);
  std::vector<LinkSample> out;
  for (int i = 0; i < s.samples; ++i) out.push_back({s.id, i});
  return out;
}

SpacePtr PresentedSpace::with_tm(TMStructure tm) const {
  auto copy = std::make_shared<PresentedSpace>(*this);
  copy->tm_ = std::move(tm);
  return copy;
}

// ---------------------------------------------------------------------------
// present

namespace {

using Pairs = std::vector<std::pair<StratumId, StratumId>>;

SpacePtr finish(std::vector<Stratum> strata, const Pairs& leq, std::map<StratumId, SpacePtr> links,
                TMStructure tm, bool compact) {
  auto space = std::make_shared<PresentedSpace>(std::move(strata), leq, std::move(links),
                                                std::move(tm), compact);
  return space->with_tm(separate_tubes(*space, space->tm()));
}

/// Copies strata, incidences, links and tubes of `inner` under the id prefix `token`.
struct Prefixed {
  std::vector<Stratum> strata;
  Pairs leq;
  std::map<StratumId, SpacePtr> links;
  std::map<StratumId, Tube> tubes;
};

Prefixed prefix_all(const PresentedSpace& inner, const std::string& token, int dim_shift) {
  Prefixed out;
  for (auto s : inner.strata()) {
    s.id = s.id.prefixed(token);
    s.dim += dim_shift;
    out.strata.push_back(std::move(s));
  }
  for (const auto& [a, b] : inner.leq_pairs()) {
    out.leq.emplace_back(a.prefixed(token), b.prefixed(token));
  }
  for (const auto& [id, link] : inner.links()) out.links.emplace(id.prefixed(token), link);
  auto rename = [&](const StratumId& id) { return id.prefixed(token); };
  for (const auto& [id, tube] : inner.tm().tubes) {
    out.tubes.emplace(id.prefixed(token), relabel_tube(tube, rename, token + "/"));
  }
  return out;
}

Tube vertex_tube(const StratumId& base, const SpacePtr& link,
                 const std::function<StratumId(const StratumId&)>& fiber_of) {
  Tube t;
  t.base = base;
  t.link = link;
  t.charts.push_back({base.str() + "#0", base, ChartKind::BundleChart});
  t.group = CocycleGroup::trivial(*link);
  for (const auto& q : link->strata()) t.fiber.emplace(q.id, fiber_of(q.id));
  return t;
}

SpacePtr present_cone(const SpacePtr& link, int samples) {
  if (!link->compact()) {
    throw Error(ErrorCode::ConeOverNonCompact, "cone argument must be compact");
  }
  Prefixed body = prefix_all(*link, "c", 1);
  const StratumId vertex({"v"});
  body.strata.push_back({vertex, 0, "v", samples});
  body.leq.emplace_back(vertex, vertex);
  for (const auto& s : link->strata()) body.leq.emplace_back(vertex, s.id.prefixed("c"));
  body.links.emplace(vertex, link);
  TMStructure tm;
  tm.tubes = std::move(body.tubes);
  tm.tubes.emplace(vertex, vertex_tube(vertex, link, [](const StratumId& q) {
                     return q.prefixed("c");
                   }));
  return finish(std::move(body.strata), body.leq, std::move(body.links), std::move(tm), false);
}

SpacePtr present_impl(const StratSpaceExpr& expr, int samples) {
  using Kind = StratSpaceExpr::Kind;
  switch (expr.kind()) {
    case Kind::Smooth: {
      const auto& m = expr.manifold();
      if (!is_valid_label(m.label)) throw Error(ErrorCode::InvalidLabel, m.label);
      if (m.dim < 0) throw Error(ErrorCode::InvalidInput, "negative dimension");
      StratumId id({"m:" + m.label});
      return std::make_shared<PresentedSpace>(std::vector<Stratum>{{id, m.dim, m.label, samples}},
                                              Pairs{{id, id}}, std::map<StratumId, SpacePtr>{},
                                              TMStructure{}, m.compact);
    }
    case Kind::Cone:
      return present_cone(present_impl(expr.args().at(0), samples), samples);
    case Kind::Product: {
      const auto& m = expr.manifold();
      if (!is_valid_label(m.label)) throw Error(ErrorCode::InvalidLabel, m.label);
      if (m.dim < 0) throw Error(ErrorCode::InvalidInput, "negative dimension");
      auto inner = present_impl(expr.args().at(0), samples);
      Prefixed p = prefix_all(*inner, "x:" + m.label, m.dim);
      TMStructure tm;
      tm.tubes = std::move(p.tubes);
      return finish(std::move(p.strata), p.leq, std::move(p.links), std::move(tm),
                    m.compact && inner->compact());
    }
    case Kind::Disjoint: {
      if (expr.args().empty()) throw Error(ErrorCode::EmptyDisjoint, "disjoint union of nothing");
      std::vector<Stratum> strata;
      Pairs leq;
      std::map<StratumId, SpacePtr> links;
      TMStructure tm;
      bool compact = true;
      for (std::size_t i = 0; i < expr.args().size(); ++i) {
        auto part = present_impl(expr.args()[i], samples);
        Prefixed p = prefix_all(*part, "d:" + std::to_string(i), 0);
        strata.insert(strata.end(), p.strata.begin(), p.strata.end());
        leq.insert(leq.end(), p.leq.begin(), p.leq.end());
        links.merge(p.links);
        tm.tubes.merge(p.tubes);
        compact = compact && part->compact();
      }
      return finish(std::move(strata), leq, std::move(links), std::move(tm), compact);
    }
    case Kind::Suspension:
      return suspension(present_impl(expr.args().at(0), samples));
    case Kind::Given:
      if (!expr.presented()) throw Error(ErrorCode::InvalidInput, "empty embedded space");
      return expr.presented();
  }
  throw Error(ErrorCode::InvalidInput, "unknown expression kind");
}

}  // namespace

SpacePtr present(const StratSpaceExpr& expr, int samples_per_stratum) {
  if (samples_per_stratum <= 0) throw Error(ErrorCode::InvalidInput, "sample count must be positive");
  return present_impl(expr, samples_per_stratum);
}

SpacePtr suspension(const SpacePtr& base) {
  if (!base->compact()) throw Error(ErrorCode::ConeOverNonCompact, "suspension of a non-compact space");
  int samples = base->strata().empty() ? 8 : base->strata().front().samples;
  Prefixed body = prefix_all(*base, "s", 1);
  TMStructure tm;
  tm.tubes = std::move(body.tubes);
  for (const char* pole : {"p+", "p-"}) {
    StratumId id({pole});
    body.strata.push_back({id, 0, pole, samples});
    body.leq.emplace_back(id, id);
    for (const auto& s : base->strata()) body.leq.emplace_back(id, s.id.prefixed("s"));
    body.links.emplace(id, base);
    tm.tubes.emplace(id, vertex_tube(id, base, [](const StratumId& q) { return q.prefixed("s"); }));
  }
  return finish(std::move(body.strata), body.leq, std::move(body.links), std::move(tm), true);
}

// ---------------------------------------------------------------------------
// poset operations

namespace {

std::vector<int> chain_lengths(const PresentedSpace& space) {
  const std::size_t n = space.size();
  std::vector<int> memo(n, -1);
  std::vector<bool> on_stack(n, false);
  std::function<int(std::size_t)> go = [&](std::size_t i) -> int {
    if (memo[i] >= 0) return memo[i];
    if (on_stack[i]) return 0;  // cyclic relation; reported by validation
    on_stack[i] = true;
    int best = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && space.leq(i, j)) best = std::max(best, 1 + go(j));
    }
    on_stack[i] = false;
    memo[i] = best;
    return best;
  };
  for (std::size_t i = 0; i < n; ++i) go(i);
  return memo;
}

}  // namespace

int length(const PresentedSpace& space) {
  auto lengths = chain_lengths(space);
  return lengths.empty() ? 0 : *std::max_element(lengths.begin(), lengths.end());
}

int stratum_length(const PresentedSpace& space, const StratumId& id) {
  auto i = space.index_of(id);
  if (!i) throw Error(ErrorCode::UnknownStratum, id.str());
  return chain_lengths(space)[*i];
}

StrataClasses classify_strata(const PresentedSpace& space) {
  StrataClasses out;
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool has_above = false;
    bool has_below = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      has_above = has_above || space.leq(i, j);
      has_below = has_below || space.leq(j, i);
    }
    const auto& id = space.strata()[i].id;
    (has_above ? out.singular : out.regular).insert(id);
    if (!has_below) out.minimal.insert(id);
  }
  return out;
}

std::set<StratumId> minimal_singular(const PresentedSpace& space) {
  auto cls = classify_strata(space);
  std::set<StratumId> out;
  std::set_intersection(cls.minimal.begin(), cls.minimal.end(), cls.singular.begin(),
                        cls.singular.end(), std::inserter(out, out.end()));
  return out;
}

PosetQuery poset_query(const PresentedSpace& space, const StratumId& id) {
  auto i = space.index_of(id);
  if (!i) throw Error(ErrorCode::UnknownStratum, id.str());
  PosetQuery q;
  for (std::size_t j = 0; j < space.size(); ++j) {
    if (space.leq(j, *i)) q.closure.insert(space.strata()[j].id);
    if (space.leq(*i, j)) q.incidence_neighborhood.insert(space.strata()[j].id);
  }
  return q;
}

// ---------------------------------------------------------------------------
// validation

Report validate_pseudomanifold(const PresentedSpace& space) {
  Report report;
  const std::size_t n = space.size();
  const auto& strata = space.strata();
  if (n == 0) {
    report.add("EmptySpace");
    return report;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!space.leq(i, i)) report.add("NotAPartialOrder", {strata[i].id}, "not reflexive");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !space.leq(i, j)) continue;
      if (space.leq(j, i) && i < j) {
        report.add("NotAPartialOrder", {strata[i].id, strata[j].id}, "not antisymmetric");
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (space.leq(j, k) && !space.leq(i, k)) {
          report.add("NotAPartialOrder", {strata[i].id, strata[j].id, strata[k].id},
                     "not transitive");
        }
      }
      if (strata[i].dim >= strata[j].dim) {
        report.add("DimensionNotMonotone", {strata[i].id, strata[j].id});
      }
    }
  }
  if (!report.ok()) return report;  // the rest assumes a partial order

  const int len = length(space);
  auto cls = classify_strata(space);
  for (const auto& s : strata) {
    if (s.dim < 0) report.add("NegativeDimension", {s.id});
    if (s.samples <= 0) report.add("NoSamples", {s.id});
    auto q = poset_query(space, s.id);
    bool closed = q.closure.size() == 1;
    if (closed != (cls.minimal.count(s.id) > 0)) report.add("MinimalNotClosed", {s.id});
    if (cls.regular.count(s.id)) {
      if (s.dim != space.dim()) report.add("RegularStratumNotFullDimension", {s.id});
      if (space.link(s.id)) report.add("UnexpectedLink", {s.id});
      continue;
    }
    auto link = space.link(s.id);
    if (!link) {
      report.add("MissingLink", {s.id});
      continue;
    }
    if (!link->compact()) report.add("LinkNotCompact", {s.id});
    if (length(*link) >= len) report.add("LinkLengthNotDecreasing", {s.id});
    if (link->dim() != space.dim() - s.dim - 1) {
      report.add("LinkDimensionMismatch", {s.id},
                 "link dim " + std::to_string(link->dim()) + ", expected " +
                     std::to_string(space.dim() - s.dim - 1));
    }
    report.merge(validate_pseudomanifold(*link), "link(" + s.id.str() + ")");
  }
  for (const auto& [id, _] : space.links()) {
    if (!space.contains(id)) report.add("DanglingLink", {id});
  }
  return report;
}

// ---------------------------------------------------------------------------
// localize

SpacePtr localize(const PresentedSpace& space, const std::vector<StratumId>& chain) {
  if (chain.empty()) throw Error(ErrorCode::NotAChain, "empty chain");
  for (const auto& id : chain) {
    if (!space.contains(id)) throw Error(ErrorCode::NotAChain, "unknown stratum " + id.str());
  }
  auto cls = classify_strata(space);
  if (!cls.minimal.count(chain.front()) || !cls.regular.count(chain.back())) {
    throw Error(ErrorCode::NotAChain, "chain must run from a minimal to a maximal stratum");
  }
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    if (!space.lt(chain[k], chain[k + 1])) {
      throw Error(ErrorCode::NotAChain, chain[k].str() + " is not below " + chain[k + 1].str());
    }
    for (const auto& s : space.strata()) {
      if (space.lt(chain[k], s.id) && space.lt(s.id, chain[k + 1])) {
        throw Error(ErrorCode::NotAChain, "chain skips " + s.id.str());
      }
    }
  }
  std::set<StratumId> keep(chain.begin(), chain.end());
  std::vector<Stratum> strata;
  for (const auto& s : space.strata()) {
    if (keep.count(s.id)) strata.push_back(s);
  }
  Pairs leq;
  for (const auto& [a, b] : space.leq_pairs()) {
    if (keep.count(a) && keep.count(b)) leq.emplace_back(a, b);
  }
  std::map<StratumId, SpacePtr> links;
  TMStructure tm;
  for (const auto& id : chain) {
    if (auto l = space.link(id)) links.emplace(id, l);
    if (const Tube* t = space.tube(id)) {
      Tube copy = *t;
      copy.family.reset();
      for (auto it = copy.fiber.begin(); it != copy.fiber.end();) {
        it = keep.count(it->second) ? std::next(it) : copy.fiber.erase(it);
      }
      tm.tubes.emplace(id, std::move(copy));
    }
  }
  tm.nesting_ok = true;
  tm.justification = "single incidence chain; tubes nested along the chain";
  bool whole = keep.size() == space.size();
  return std::make_shared<PresentedSpace>(std::move(strata), leq, std::move(links), std::move(tm),
                                          whole && space.compact(), true);
}

// ---------------------------------------------------------------------------
// isomorphism

namespace {

class IsoSearch {
 public:
  IsoSearch(const PresentedSpace& a, const PresentedSpace& b) : a_(a), b_(b) {}

  std::optional<StratumBijection> run() {
    const std::size_t n = a_.size();
    if (n != b_.size() || a_.compact() != b_.compact()) return std::nullopt;
    auto la = chain_lengths(a_);
    auto lb = chain_lengths(b_);
    auto profile = [](const PresentedSpace& s, const std::vector<int>& lens, std::size_t i) {
      int above = 0, below = 0;
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (j == i) continue;
        above += s.leq(i, j);
        below += s.leq(j, i);
      }
      return std::array<int, 4>{s.strata()[i].dim, above, below, lens[i]};
    };
    candidates_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      auto pa = profile(a_, la, i);
      for (std::size_t j = 0; j < n; ++j) {
        if (profile(b_, lb, j) != pa) continue;
        if (!local_match(a_.strata()[i].id, b_.strata()[j].id)) continue;
        candidates_[i].push_back(j);
      }
      if (candidates_[i].empty()) return std::nullopt;
    }
    order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) {
      return candidates_[x].size() < candidates_[y].size();
    });
    image_.assign(n, npos);
    used_.assign(n, false);
    if (!assign(0)) return std::nullopt;
    StratumBijection out;
    for (std::size_t i = 0; i < n; ++i) out.emplace(a_.strata()[i].id, b_.strata()[image_[i]].id);
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool local_match(const StratumId& x, const StratumId& y) const {
    auto lx = a_.link(x);
    auto ly = b_.link(y);
    if (static_cast<bool>(lx) != static_cast<bool>(ly)) return false;
    if (lx && lx != ly && !iso_check(*lx, *ly)) return false;
    const Tube* tx = a_.tube(x);
    const Tube* ty = b_.tube(y);
    if (static_cast<bool>(tx) != static_cast<bool>(ty)) return false;
    if (tx && !groups_isomorphic(tx->group, ty->group)) return false;
    return true;
  }

  bool assign(std::size_t k) {
    if (k == order_.size()) return true;
    const std::size_t i = order_[k];
    for (std::size_t j : candidates_[i]) {
      if (used_[j]) continue;
      bool consistent = true;
      for (std::size_t kk = 0; kk < k && consistent; ++kk) {
        const std::size_t p = order_[kk];
        consistent = a_.leq(i, p) == b_.leq(j, image_[p]) && a_.leq(p, i) == b_.leq(image_[p], j);
      }
      if (!consistent) continue;
      image_[i] = j;
      used_[j] = true;
      if (assign(k + 1)) return true;
      used_[j] = false;
      image_[i] = npos;
    }
    return false;
  }

  const PresentedSpace& a_;
  const PresentedSpace& b_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> image_;
  std::vector<bool> used_;
};

bool tubes_equal(const Tube& a, const Tube& b) {
  if (a.base != b.base || a.charts != b.charts || a.transitions != b.transitions ||
      a.triples != b.triples || a.fiber != b.fiber || a.family != b.family) {
    return false;
  }
  if (a.group.order() != b.group.order()) return false;
  for (int i = 0; i < a.group.order(); ++i) {
    if (a.group.elements[i].name != b.group.elements[i].name ||
        !a.group.elements[i].same_action(b.group.elements[i])) {
      return false;
    }
  }
  return a.link == b.link || (a.link && b.link && structurally_equal(*a.link, *b.link));
}

}  // namespace

std::optional<StratumBijection> iso_check(const PresentedSpace& a, const PresentedSpace& b) {
  return IsoSearch(a, b).run();
}

bool structurally_equal(const PresentedSpace& a, const PresentedSpace& b) {
  if (&a == &b) return true;
  if (a.strata() != b.strata() || a.compact() != b.compact() || a.localized() != b.localized()) {
    return false;
  }
  if (a.leq_pairs() != b.leq_pairs()) return false;
  if (a.links().size() != b.links().size()) return false;
  for (const auto& [id, link] : a.links()) {
    auto other = b.link(id);
    if (!other) return false;
    if (link != other && !structurally_equal(*link, *other)) return false;
  }
  const auto& ta = a.tm();
  const auto& tb = b.tm();
  if (ta.nesting_ok != tb.nesting_ok || ta.families != tb.families ||
      ta.tubes.size() != tb.tubes.size()) {
    return false;
  }
  for (const auto& [id, tube] : ta.tubes) {
    const Tube* other = b.tube(id);
    if (!other || !tubes_equal(tube, *other)) return false;
  }
  return true;
}

}  // namespace stratcalc

#ifndef STRATCALC_TEST_ORACLES_HPP
#define STRATCALC_TEST_ORACLES_HPP

// Independent reference computations. They only read the public poset data
// and recompute everything by exhaustive enumeration.

#include <algorithm>
#include <set>
#include <vector>

#include "stratcalc/space.hpp"

namespace oracle {

using stratcalc::PresentedSpace;
using stratcalc::StratumId;

inline void extend_chains(const PresentedSpace& p, std::vector<StratumId>& chain,
                          std::vector<std::vector<StratumId>>& out) {
  out.push_back(chain);
  for (const auto& s : p.strata()) {
    if (p.leq(chain.back(), s.id) && chain.back() != s.id) {
      chain.push_back(s.id);
      extend_chains(p, chain, out);
      chain.pop_back();
    }
  }
}

/// Every strict chain of the poset (each listed from its bottom).
inline std::vector<std::vector<StratumId>> all_chains(const PresentedSpace& p) {
  std::vector<std::vector<StratumId>> out;
  for (const auto& s : p.strata()) {
    std::vector<StratumId> chain{s.id};
    extend_chains(p, chain, out);
  }
  return out;
}

inline int longest_chain(const PresentedSpace& p) {
  int best = 0;
  for (const auto& c : all_chains(p)) best = std::max(best, static_cast<int>(c.size()) - 1);
  return best;
}

inline std::set<StratumId> minima(const PresentedSpace& p) {
  std::set<StratumId> out;
  for (const auto& s : p.strata()) {
    bool minimal = std::none_of(p.strata().begin(), p.strata().end(),
                                [&](const auto& t) { return t.id != s.id && p.leq(t.id, s.id); });
    if (minimal) out.insert(s.id);
  }
  return out;
}

inline std::set<StratumId> maxima(const PresentedSpace& p) {
  std::set<StratumId> out;
  for (const auto& s : p.strata()) {
    bool maximal = std::none_of(p.strata().begin(), p.strata().end(),
                                [&](const auto& t) { return t.id != s.id && p.leq(s.id, t.id); });
    if (maximal) out.insert(s.id);
  }
  return out;
}

inline std::set<StratumId> below(const PresentedSpace& p, const StratumId& s) {
  std::set<StratumId> out;
  for (const auto& t : p.strata()) {
    if (p.leq(t.id, s)) out.insert(t.id);
  }
  return out;
}

inline std::set<StratumId> above(const PresentedSpace& p, const StratumId& s) {
  std::set<StratumId> out;
  for (const auto& t : p.strata()) {
    if (p.leq(s, t.id)) out.insert(t.id);
  }
  return out;
}

inline StratumId id(const char* text) { return StratumId::parse(text); }

}  // namespace oracle

#endif

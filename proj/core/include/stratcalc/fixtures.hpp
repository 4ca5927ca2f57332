#ifndef STRATCALC_FIXTURES_HPP
#define STRATCALC_FIXTURES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stratcalc/morphism.hpp"
#include "stratcalc/space.hpp"

namespace stratcalc::fixtures {

/// Smooth("M", 2, compact).
SpacePtr smooth_surface();
/// Cone(S^1).
SpacePtr cone_circle();
/// U x Cone(S^1) with U = R.
SpacePtr line_times_cone();
/// Suspension of the circle N: poles p+ and p-.
SpacePtr sigma_circle();
/// Cone over the suspended circle.
SpacePtr cone_sigma();
/// Two disjoint cones over circles.
SpacePtr cone_pair();
/// Cone bundle over a circle whose two charts differ by the antipodal map of
/// the link (structure group Z/2).
SpacePtr twisted_bundle();

/// Antipodal map of a circle link with evenly spaced samples.
LinkMap antipodal(const PresentedSpace& circle);

/// (u,[g(l),r]) on the vertex (or base) tube, identity everywhere else.
StratMorphism link_rotation(const SpacePtr& space, const StratumId& base, int shift);
/// Exchange of the two poles of the suspension.
StratMorphism pole_swap(const SpacePtr& sigma);
/// f(u,[l,r]) = (u^2, [l, r(1+u^2)]) on U x Cone(S^1); stratified only.
StratMorphism warp(const SpacePtr& line_cone);
/// Cone(S^1) -> Cone(sigma N) induced by S^1 -> body of sigma N.
StratMorphism cone_embedding(const SpacePtr& cone, const SpacePtr& cone_sig);
/// Antipodal cocycle morphism of the twisted bundle.
StratMorphism bundle_twist(const SpacePtr& bundle);

struct NamedSpace {
  std::string name;
  SpacePtr space;
};

/// The three reference spaces: smooth, Cone(S^1), Cone(sigma N).
std::vector<NamedSpace> reference_spaces();

/// Deterministic generator of valid Thom-Mather spaces with lengths in
/// [min_length, max_length] and at most `max_strata` strata.
std::vector<NamedSpace> generate_corpus(std::uint64_t seed, int count, int min_length = 1,
                                        int max_length = 4, int max_strata = 12);

}  // namespace stratcalc::fixtures

#endif  // STRATCALC_FIXTURES_HPP

#ifndef STRATCALC_GRID_HPP
#define STRATCALC_GRID_HPP

#include <vector>

namespace stratcalc {

/// Deterministic sample grid shared by every numeric check.
struct GridSpec {
  int u_points = 5;
  /// Radial values; cone charts use the nonnegative part.
  std::vector<double> t_values{-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0};

  /// Grid with `n` lattice points per axis and the radial set enlarged by ±k/n.
  static GridSpec refined(int n);
};

inline constexpr double kTol = 1e-9;

/// Lattice of u_points^dim points in [-1,1]^dim (one empty point when dim = 0).
std::vector<std::vector<double>> u_lattice(int dim, const GridSpec& grid);
std::vector<double> cone_radii(const GridSpec& grid);
std::vector<double> cylinder_heights(const GridSpec& grid);

}  // namespace stratcalc

#endif  // STRATCALC_GRID_HPP

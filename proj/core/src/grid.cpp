#include "stratcalc/grid.hpp"

#include <algorithm>

#include "stratcalc/error.hpp"

namespace stratcalc {

GridSpec GridSpec::refined(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "grid density must be at least 2");
  GridSpec g;
  g.u_points = n;
  for (int k = 1; k <= n; ++k) {
    double t = static_cast<double>(k) / n;
    g.t_values.push_back(t);
    g.t_values.push_back(-t);
  }
  std::sort(g.t_values.begin(), g.t_values.end());
  g.t_values.erase(std::unique(g.t_values.begin(), g.t_values.end()), g.t_values.end());
  return g;
}

std::vector<std::vector<double>> u_lattice(int dim, const GridSpec& grid) {
  if (grid.u_points < 1) throw Error(ErrorCode::InvalidInput, "empty u lattice");
  std::vector<double> axis;
  for (int i = 0; i < grid.u_points; ++i) {
    axis.push_back(grid.u_points == 1 ? 0.0 : -1.0 + 2.0 * i / (grid.u_points - 1));
  }
  std::vector<std::vector<double>> points{{}};
  for (int d = 0; d < dim; ++d) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points) {
      for (double x : axis) {
        auto q = p;
        q.push_back(x);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<double> cone_radii(const GridSpec& grid) {
  std::vector<double> out;
  for (double t : grid.t_values) {
    if (t >= 0.0) out.push_back(t);
  }
  return out;
}

std::vector<double> cylinder_heights(const GridSpec& grid) { return grid.t_values; }

}  // namespace stratcalc

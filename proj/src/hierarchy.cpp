#include "waveadr/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "waveadr/transfer.hpp"

namespace waveadr {

RealField build_damping_mask(const Grid2D& grid, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("build_damping_mask: omega must be positive");
  const double w = 2.0 * std::numbers::pi / omega;  // one wavelength at c = 1
  RealField gamma(grid);
  for (int j = 0; j < grid.n; ++j) {
    const double y = grid.coord(j);
    const double dy = std::min(y, grid.side - y);
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.coord(i);
      const double d = std::min({x, grid.side - x, dy});
      gamma.at(i, j) = d >= w ? 0.0 : omega * ((w - d) / w) * ((w - d) / w);
    }
  }
  return gamma;
}

int hierarchy_depth_for(int n, int min_coarse_n) {
  if (n < min_coarse_n || n % 2 == 0) return 0;
  int levels = 1;
  while ((n - 1) / 2 >= min_coarse_n && ((n - 1) / 2) % 2 == 1) {
    n = (n - 1) / 2;
    ++levels;
  }
  return levels;
}

bool hierarchy_compatible(int n, int min_coarse_n, int min_levels) {
  return hierarchy_depth_for(n, min_coarse_n) >= min_levels;
}

int nearest_valid_interior(int n_requested) {
  int best = -1;
  for (int m0 = 3; m0 <= 63; m0 += 2) {
    for (int levels = 4; levels <= 12; ++levels) {
      const long long n = static_cast<long long>(m0 + 1) * (1LL << (levels - 1)) - 1;
      if (n > (1 << 20)) break;
      const int ni = static_cast<int>(n);
      if (best < 0 || std::abs(ni - n_requested) < std::abs(best - n_requested) ||
          (std::abs(ni - n_requested) == std::abs(best - n_requested) && ni < best))
        best = ni;
    }
  }
  return best;
}

Hierarchy build_hierarchy(const SlownessModel& s, double omega, DepthPolicy policy) {
  if (!(omega > 0.0)) throw std::invalid_argument("build_hierarchy: omega must be positive");
  if (s.grid != s.s.grid) throw std::invalid_argument("build_hierarchy: slowness grid mismatch");
  const int n = s.grid.n;
  if (policy.max_levels != 1 && (n % 2 == 0 || n < 3)) {
    throw std::invalid_argument(
        "build_hierarchy: interior count " + std::to_string(n) +
        " cannot be coarsened; valid sizes are (m0+1)*2^(L-1)-1 for odd m0 >= 3, "
        "e.g. 15, 23, 31, 47, 63, 95, 127, 191, 255 (nearest: " +
        std::to_string(nearest_valid_interior(n)) + ")");
  }

  Hierarchy hier;
  hier.omega = omega;
  Level finest;
  finest.grid = s.grid;
  finest.s2 = RealField(s.grid);
  for (std::size_t i = 0; i < s.s.size(); ++i) finest.s2.v[i] = s.s.v[i] * s.s.v[i];
  finest.gamma = build_damping_mask(s.grid, omega);
  hier.levels.push_back(std::move(finest));

  while (true) {
    const Level& prev = hier.levels.back();
    const int np = prev.grid.n;
    if (policy.max_levels > 0 && hier.depth() >= policy.max_levels) break;
    if (np % 2 == 0 || (np - 1) / 2 < policy.min_coarse_n) break;
    if (((np - 1) / 2) % 2 == 0) break;  // keep every interior count odd
    Level next;
    next.grid = coarsen_grid(prev.grid);
    next.s2 = restrict_full_weighting(prev.s2);
    for (double& v : next.s2.v) v = std::clamp(v, 0.0625, 1.0);
    next.gamma = build_damping_mask(next.grid, omega);
    hier.levels.push_back(std::move(next));
  }
  return hier;
}

}  // namespace waveadr

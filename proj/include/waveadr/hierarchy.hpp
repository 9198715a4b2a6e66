#pragma once

#include <vector>

#include "waveadr/field.hpp"

namespace waveadr {

struct Level {
  Grid2D grid;
  RealField s2;     // squared slowness
  RealField gamma;  // absorbing-layer damping mask, in units of omega
};

/**
 * Multilevel problem descriptor, finest level first. Interior counts follow
 * n_{l+1} = (n_l - 1)/2. Each level keeps the full-weighting restriction of
 * the finer squared slowness (clamped to [0.0625, 1]) and a damping mask
 * rebuilt on its own grid.
 *
 * shift0 is the coefficient of the spectral shift term i*shift0*s2*u added by
 * the operator; shift0 = 0.01*omega^2 realizes the pointwise shift 0.01*k^2.
 */
struct Hierarchy {
  double omega = 0.0;
  double shift0 = 0.0;
  std::vector<Level> levels;

  int depth() const { return static_cast<int>(levels.size()); }
};

struct DepthPolicy {
  int min_coarse_n = 3;  // stop before the interior count would drop below this
  int max_levels = 0;    // 0 means unlimited
};

/// Quadratic sponge ramp: zero beyond one wavelength w = 2*pi/omega from the
/// boundary, rising to omega at the boundary as omega*((w-d)/w)^2.
RealField build_damping_mask(const Grid2D& grid, double omega);

Hierarchy build_hierarchy(const SlownessModel& s, double omega, DepthPolicy policy = {});

/// Number of levels the default policy produces: the chain n -> (n-1)/2 is
/// followed while every count stays odd and >= min_coarse_n.
int hierarchy_depth_for(int n, int min_coarse_n = 3);

/// True when n is odd and supports at least min_levels levels.
bool hierarchy_compatible(int n, int min_coarse_n = 3, int min_levels = 4);

/// Nearest interior count of the form (m0+1)*2^(L-1) - 1 with odd coarsest
/// m0 >= 3 and L >= 4 levels (31 is the smallest). Ties resolve downward.
int nearest_valid_interior(int n_requested);

}  // namespace waveadr

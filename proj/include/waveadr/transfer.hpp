#pragma once

#include <stdexcept>

#include "waveadr/field.hpp"

namespace waveadr {

// Intergrid transfers between nested interior grids with n_coarse = (n_fine-1)/2.
// Coarse node (I, J) coincides with fine node (2I+1, 2J+1) in 0-based indices.
//
// Restriction uses the full-weighting kernel (1/16)[1 2 1; 2 4 2; 1 2 1] with
// stride 2; prolongation is bilinear interpolation, the stride-2 transpose with
// kernel (1/4)[1 2 1; 2 4 2; 1 2 1]. Hence <prolong(x), y> = 4 <x, restrict(y)>.

inline Grid2D coarsen_grid(const Grid2D& fine) {
  if (fine.n < 3 || fine.n % 2 == 0)
    throw std::invalid_argument("coarsen_grid: interior count must be odd and >= 3");
  return Grid2D{(fine.n - 1) / 2, fine.side};
}

template <typename T>
void restrict_full_weighting(const Field<T>& fine, Field<T>& coarse) {
  const int nf = fine.grid.n;
  const int nc = coarse.grid.n;
  if (nc != (nf - 1) / 2 || nf % 2 == 0)
    throw std::invalid_argument("restrict_full_weighting: grids are not nested");
  static const double w[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  for (int J = 0; J < nc; ++J) {
    for (int I = 0; I < nc; ++I) {
      const int fi = 2 * I + 1, fj = 2 * J + 1;
      T acc{};
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          acc += fine.at(fi + di, fj + dj) * (w[dj + 1][di + 1] / 16.0);
      coarse.at(I, J) = acc;
    }
  }
}

template <typename T>
Field<T> restrict_full_weighting(const Field<T>& fine) {
  Field<T> coarse(coarsen_grid(fine.grid));
  restrict_full_weighting(fine, coarse);
  return coarse;
}

/// Overwrites `fine` with the interpolant of `coarse`.
template <typename T>
void prolong_bilinear(const Field<T>& coarse, Field<T>& fine) {
  const int nf = fine.grid.n;
  const int nc = coarse.grid.n;
  if (nc != (nf - 1) / 2 || nf % 2 == 0)
    throw std::invalid_argument("prolong_bilinear: grids are not nested");
  static const double w[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  for (auto& z : fine.v) z = T{};
  for (int J = 0; J < nc; ++J) {
    for (int I = 0; I < nc; ++I) {
      const int fi = 2 * I + 1, fj = 2 * J + 1;
      const T c = coarse.at(I, J);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          fine.at(fi + di, fj + dj) += c * (w[dj + 1][di + 1] / 4.0);
    }
  }
}

template <typename T>
Field<T> prolong_bilinear(const Field<T>& coarse, const Grid2D& fine_grid) {
  Field<T> fine(fine_grid);
  prolong_bilinear(coarse, fine);
  return fine;
}

}  // namespace waveadr

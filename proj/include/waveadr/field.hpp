#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace waveadr {

using cplx = std::complex<double>;

/**
 * Uniform grid of interior nodes on a square domain with a homogeneous
 * Dirichlet frame. Node (i, j) sits at ((i+1)h, (j+1)h) for 0-based
 * i, j in [0, n); h = side/(n+1), so h*(n+1) recovers the side length.
 */
struct Grid2D {
  int n = 0;          // interior nodes per side
  double side = 1.0;  // physical side length of the square extent

  double h() const { return side / (n + 1); }
  double coord(int i) const { return (i + 1) * h(); }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }

  bool operator==(const Grid2D& o) const { return n == o.n && side == o.side; }
  bool operator!=(const Grid2D& o) const { return !(*this == o); }
};

inline Grid2D make_grid(int n_interior, double side = 1.0) {
  if (n_interior < 3) throw std::invalid_argument("Grid2D: need at least 3 interior nodes per side");
  if (!(side > 0.0)) throw std::invalid_argument("Grid2D: extent side must be positive");
  return Grid2D{n_interior, side};
}

/// Scalar field sampled on the interior nodes, row-major by y then x:
/// entry (i, j) lives at v[j*n + i].
template <typename T>
struct Field {
  Grid2D grid;
  std::vector<T> v;

  Field() = default;
  explicit Field(const Grid2D& g, T fill = T{}) : grid(g), v(g.size(), fill) {}

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * grid.n + i; }
  T& at(int i, int j) { return v[idx(i, j)]; }
  const T& at(int i, int j) const { return v[idx(i, j)]; }
  std::size_t size() const { return v.size(); }

  T* data() { return v.data(); }
  const T* data() const { return v.data(); }
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

/// Slowness s = 1/c on the grid. Ingestion normalizes values into [0.25, 1];
/// directly constructed models (analytic tests) may use any positive range.
struct SlownessModel {
  Grid2D grid;
  RealField s;
};

namespace detail {
inline void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}
}  // namespace detail

template <typename T>
Field<T> add(const Field<T>& a, const Field<T>& b) {
  detail::require_same_grid(a.grid, b.grid, "add");
  Field<T> out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.v[i] = a.v[i] + b.v[i];
  return out;
}

template <typename T>
Field<T> sub(const Field<T>& a, const Field<T>& b) {
  detail::require_same_grid(a.grid, b.grid, "sub");
  Field<T> out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.v[i] = a.v[i] - b.v[i];
  return out;
}

template <typename T, typename S>
Field<T> scale(const Field<T>& a, S alpha) {
  Field<T> out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.v[i] = a.v[i] * alpha;
  return out;
}

/// y += alpha * x
template <typename T, typename S>
void axpy(S alpha, const Field<T>& x, Field<T>& y) {
  detail::require_same_grid(x.grid, y.grid, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y.v[i] += alpha * x.v[i];
}

/// Conjugate-linear in the first argument: sum conj(a_i) * b_i.
inline cplx inner_product(const ComplexField& a, const ComplexField& b) {
  detail::require_same_grid(a.grid, b.grid, "inner_product");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.v[i]) * b.v[i];
  return acc;
}

inline double norm2(const ComplexField& a) {
  double acc = 0.0;
  for (const cplx& z : a.v) acc += std::norm(z);
  return std::sqrt(acc);
}

inline double norm2(const std::vector<cplx>& a) {
  double acc = 0.0;
  for (const cplx& z : a) acc += std::norm(z);
  return std::sqrt(acc);
}

// Span-level helpers shared by the matrix-free solvers.

inline cplx vec_dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double vec_norm(std::span<const cplx> a) {
  double acc = 0.0;
  for (const cplx& z : a) acc += std::norm(z);
  return std::sqrt(acc);
}

}  // namespace waveadr

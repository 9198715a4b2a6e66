#pragma once

#include <utility>
#include <vector>

#include "waveadr/field.hpp"
#include "waveadr/hierarchy.hpp"
#include "waveadr/linear_op.hpp"

namespace waveadr {

/**
 * Matrix-free five-point Helmholtz operator on one hierarchy level:
 *
 *   (A u)_{ij} = (1/h^2)(4 u_{ij} - u_{i+-1,j} - u_{i,j+-1})
 *              + (-omega^2 s2 + i(omega gamma s2 + shift0 s2 + beta)) u_{ij}
 *
 * with zero (Dirichlet) values outside the interior frame. beta is an extra
 * constant imaginary shift used by the shifted-Laplacian preconditioner and is
 * 0 for the plain operator. The stencil is complex symmetric, so the adjoint
 * is the same sweep with conjugated zero-order coefficients.
 */
class HelmholtzLevelOp final : public LinearOperator {
 public:
  HelmholtzLevelOp(const Hierarchy& hier, int level, double beta = 0.0);

  std::size_t size() const override { return grid_.size(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void apply_adjoint(std::span<const cplx> x, std::span<cplx> y) const override;
  void diagonal(std::span<cplx> d) const override;

  const Grid2D& grid() const { return grid_; }
  int level() const { return level_; }
  double min_abs_diagonal() const { return min_abs_diag_; }

 private:
  void apply_impl(std::span<const cplx> x, std::span<cplx> y, bool conj_coeff) const;

  Grid2D grid_;
  int level_;
  std::vector<cplx> zero_order_;  // per-node zero-order coefficient
  double inv_h2_;
  double min_abs_diag_;
};

ComplexField apply_helmholtz(const HelmholtzLevelOp& op, const ComplexField& u);

/// Point source delta(x - x0) discretized as 1/h^2 at the given node.
ComplexField point_source(const Grid2D& grid, int i, int j);

/// Center node of an odd grid.
std::pair<int, int> center_node(const Grid2D& grid);

// ---- 1D model-problem spectral toolbox --------------------------------------
// A = (1/h^2) tridiag(-1, 2, -1) - k^2 I on n interior nodes, h = 1/(n+1).

class Model1DOperator final : public LinearOperator {
 public:
  Model1DOperator(int n, double k);

  std::size_t size() const override { return static_cast<std::size_t>(n_); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void apply_adjoint(std::span<const cplx> x, std::span<cplx> y) const override {
    apply(x, y);  // real symmetric
  }
  void diagonal(std::span<cplx> d) const override;

  double h() const { return h_; }
  double k() const { return k_; }

 private:
  int n_;
  double h_, k_;
};

struct ModelEigenpair {
  double lambda;          // (4/h^2) sin^2(j pi h / 2) - k^2
  std::vector<double> v;  // v_i = sin(i j pi h), i = 1..n
};

/// Closed-form eigenpairs of the 1D model operator, j = 1..n.
std::vector<ModelEigenpair> model_eigenpairs(int n, double k);

/// Damped-Jacobi weights for the 1D model problem.
double jacobi_omega0(double k, double h);  // (2 - k^2 h^2) / (3 - k^2 h^2)
double jacobi_omega1(double k, double h);  // (2 - k^2 h^2) / (2 sin^2(pi h/2) - k^2 h^2 / 2)

}  // namespace waveadr

#include "waveadr/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace waveadr {

HelmholtzLevelOp::HelmholtzLevelOp(const Hierarchy& hier, int level, double beta) {
  if (level < 0 || level >= hier.depth())
    throw std::out_of_range("HelmholtzLevelOp: level index out of range");
  const Level& lv = hier.levels[level];
  grid_ = lv.grid;
  level_ = level;
  const double h = grid_.h();
  inv_h2_ = 1.0 / (h * h);
  const double w2 = hier.omega * hier.omega;
  zero_order_.resize(grid_.size());
  min_abs_diag_ = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < zero_order_.size(); ++p) {
    const double s2 = lv.s2.v[p];
    zero_order_[p] = cplx(-w2 * s2, hier.omega * lv.gamma.v[p] * s2 + hier.shift0 * s2 + beta);
    min_abs_diag_ = std::min(min_abs_diag_, std::abs(4.0 * inv_h2_ + zero_order_[p]));
  }
}

void HelmholtzLevelOp::apply_impl(std::span<const cplx> x, std::span<cplx> y, bool conj_coeff) const {
  if (x.size() != size() || y.size() != size())
    throw std::invalid_argument("HelmholtzLevelOp: size mismatch");
  const int n = grid_.n;
  for (int j = 0; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * n;
    for (int i = 0; i < n; ++i) {
      const std::size_t p = row + i;
      cplx nb{0.0, 0.0};
      if (i > 0) nb += x[p - 1];
      if (i < n - 1) nb += x[p + 1];
      if (j > 0) nb += x[p - n];
      if (j < n - 1) nb += x[p + n];
      const cplx z = conj_coeff ? std::conj(zero_order_[p]) : zero_order_[p];
      y[p] = inv_h2_ * (4.0 * x[p] - nb) + z * x[p];
    }
  }
}

void HelmholtzLevelOp::apply(std::span<const cplx> x, std::span<cplx> y) const {
  apply_impl(x, y, false);
}

void HelmholtzLevelOp::apply_adjoint(std::span<const cplx> x, std::span<cplx> y) const {
  apply_impl(x, y, true);
}

void HelmholtzLevelOp::diagonal(std::span<cplx> d) const {
  if (d.size() != size()) throw std::invalid_argument("HelmholtzLevelOp: size mismatch");
  for (std::size_t p = 0; p < d.size(); ++p) d[p] = 4.0 * inv_h2_ + zero_order_[p];
}

ComplexField apply_helmholtz(const HelmholtzLevelOp& op, const ComplexField& u) {
  if (u.grid != op.grid()) throw std::invalid_argument("apply_helmholtz: grid mismatch");
  ComplexField out(u.grid);
  op.apply(u.v, out.v);
  return out;
}

ComplexField point_source(const Grid2D& grid, int i, int j) {
  if (i < 0 || i >= grid.n || j < 0 || j >= grid.n)
    throw std::out_of_range("point_source: node outside the grid");
  ComplexField g(grid);
  const double h = grid.h();
  g.at(i, j) = cplx(1.0 / (h * h), 0.0);
  return g;
}

std::pair<int, int> center_node(const Grid2D& grid) {
  return {(grid.n - 1) / 2, (grid.n - 1) / 2};
}

Model1DOperator::Model1DOperator(int n, double k) : n_(n), h_(1.0 / (n + 1)), k_(k) {
  if (n < 1) throw std::invalid_argument("Model1DOperator: n must be positive");
}

void Model1DOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != size() || y.size() != size())
    throw std::invalid_argument("Model1DOperator: size mismatch");
  const double ih2 = 1.0 / (h_ * h_);
  const double k2 = k_ * k_;
  for (int i = 0; i < n_; ++i) {
    cplx nb{0.0, 0.0};
    if (i > 0) nb += x[i - 1];
    if (i < n_ - 1) nb += x[i + 1];
    y[i] = ih2 * (2.0 * x[i] - nb) - k2 * x[i];
  }
}

void Model1DOperator::diagonal(std::span<cplx> d) const {
  if (d.size() != size()) throw std::invalid_argument("Model1DOperator: size mismatch");
  const double val = 2.0 / (h_ * h_) - k_ * k_;
  for (auto& z : d) z = val;
}

std::vector<ModelEigenpair> model_eigenpairs(int n, double k) {
  const double h = 1.0 / (n + 1);
  std::vector<ModelEigenpair> out(n);
  for (int j = 1; j <= n; ++j) {
    ModelEigenpair& ep = out[j - 1];
    const double s = std::sin(j * std::numbers::pi * h / 2.0);
    ep.lambda = 4.0 / (h * h) * s * s - k * k;
    ep.v.resize(n);
    for (int i = 1; i <= n; ++i) ep.v[i - 1] = std::sin(i * j * std::numbers::pi * h);
  }
  return out;
}

double jacobi_omega0(double k, double h) {
  const double kh2 = k * k * h * h;
  const double den = 3.0 - kh2;
  if (std::abs(den) < 1e-12)
    throw std::domain_error("jacobi_omega0: undefined, k^2 h^2 too close to 3");
  return (2.0 - kh2) / den;
}

double jacobi_omega1(double k, double h) {
  const double kh2 = k * k * h * h;
  const double sp = std::sin(std::numbers::pi * h / 2.0);
  const double den = 2.0 * sp * sp - kh2 / 2.0;
  if (std::abs(den) < 1e-12)
    throw std::domain_error("jacobi_omega1: undefined, degenerate denominator");
  return (2.0 - kh2) / den;
}

}  // namespace waveadr

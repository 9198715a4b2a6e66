#include "waveadr/smoothers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "waveadr/helmholtz.hpp"

namespace waveadr {

std::vector<double> chebyshev_inverse_betas(const ChebyParams& p) {
  if (!(p.alpha > 1.0)) throw std::invalid_argument("ChebyParams: alpha must exceed 1");
  if (!(p.lambda_max > 0.0)) throw std::invalid_argument("ChebyParams: lambda_max must be positive");
  if (p.q_steps < 0) throw std::invalid_argument("ChebyParams: q_steps must be nonnegative");
  std::vector<double> ib(p.q_steps);
  const double mid = p.lambda_max * (1.0 + 1.0 / p.alpha) / 2.0;
  const double rad = p.lambda_max * (1.0 - 1.0 / p.alpha) / 2.0;
  for (int q = 0; q < p.q_steps; ++q)
    ib[q] = mid + rad * std::cos(std::numbers::pi * (2 * q + 1) / (2.0 * p.q_steps));
  return ib;
}

void jacobi_sweep(const LinearOperator& op, std::span<const cplx> g, std::span<cplx> u,
                  double omega, int steps) {
  const std::size_t n = op.size();
  if (g.size() != n || u.size() != n) throw std::invalid_argument("jacobi_sweep: size mismatch");
  if (steps <= 0 || omega == 0.0) return;

  std::vector<cplx> d(n);
  op.diagonal(d);
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (const cplx& z : d) {
    dmax = std::max(dmax, std::abs(z));
    dmin = std::min(dmin, std::abs(z));
  }
  if (dmin <= 1e-14 * dmax) {
    std::string where = "jacobi_sweep: zero diagonal entry";
    if (auto* hop = dynamic_cast<const HelmholtzLevelOp*>(&op))
      where += " on level " + std::to_string(hop->level() + 1);
    throw std::domain_error(where);
  }

  std::vector<cplx> r(n);
  for (int s = 0; s < steps; ++s) {
    op.apply(u, r);
    for (std::size_t p = 0; p < n; ++p) u[p] += omega * (g[p] - r[p]) / d[p];
  }
}

double estimate_lambda_max(const LinearOperator& op) {
  const std::size_t n = op.size();
  std::mt19937_64 rng(0x5ca1ab1eULL);  // fixed seed: estimates are reproducible
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cplx> v(n), w1(n), w2(n);
  for (auto& z : v) z = cplx(nd(rng), nd(rng));
  double nv = vec_norm(v);
  for (auto& z : v) z /= nv;

  double rho = 0.0;
  for (int it = 0; it < 30; ++it) {
    op.apply(v, w1);
    op.apply_adjoint(w1, w2);
    rho = vec_dot(v, w2).real();  // real by hermitian symmetry of A*A
    const double nw = vec_norm(w2);
    if (nw == 0.0) return 0.0;
    for (std::size_t p = 0; p < n; ++p) v[p] = w2[p] / nw;
  }
  return 1.05 * rho;
}

void chebyshev_semi_sweep(const LinearOperator& op, std::span<const cplx> g, std::span<cplx> u,
                          const ChebyParams& params) {
  const std::size_t n = op.size();
  if (g.size() != n || u.size() != n)
    throw std::invalid_argument("chebyshev_semi_sweep: size mismatch");
  const std::vector<double> ib = chebyshev_inverse_betas(params);
  if (ib.empty()) return;

  std::vector<cplx> astar_g(n), w1(n), w2(n);
  op.apply_adjoint(g, astar_g);  // computed once per sweep
  for (double ibq : ib) {
    op.apply(u, w1);
    op.apply_adjoint(w1, w2);
    const double beta = 1.0 / ibq;
    for (std::size_t p = 0; p < n; ++p) u[p] += beta * (astar_g[p] - w2[p]);
  }
}

namespace {

// Unitary Givens rotation [c, s; -conj(s), c] with real c zeroing b in (a, b).
void make_givens(cplx a, cplx b, double& c, cplx& s) {
  const double aa = std::abs(a), ab = std::abs(b);
  if (ab == 0.0) {
    c = 1.0;
    s = cplx(0.0, 0.0);
    return;
  }
  if (aa == 0.0) {
    c = 0.0;
    s = cplx(1.0, 0.0);
    return;
  }
  const double t = std::hypot(aa, ab);
  c = aa / t;
  s = (a / aa) * std::conj(b) / t;
}

}  // namespace

double gmres_m(const LinearOperator& op, std::span<const cplx> g, std::span<cplx> u, int m) {
  const std::size_t n = op.size();
  if (g.size() != n || u.size() != n) throw std::invalid_argument("gmres_m: size mismatch");
  if (m < 1) throw std::invalid_argument("gmres_m: need at least one step");
  m = static_cast<int>(std::min<std::size_t>(m, n));

  std::vector<std::vector<cplx>> V;
  V.reserve(m + 1);
  std::vector<cplx> r(n);
  op.apply(u, r);
  for (std::size_t p = 0; p < n; ++p) r[p] = g[p] - r[p];
  const double beta = vec_norm(r);
  if (beta == 0.0) return 0.0;
  for (auto& z : r) z /= beta;
  V.push_back(std::move(r));

  std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, cplx(0, 0)));
  std::vector<double> givens_c(m);
  std::vector<cplx> givens_s(m);
  std::vector<cplx> gvec(m + 1, cplx(0, 0));
  gvec[0] = beta;

  int steps = 0;
  double res = beta;
  for (int j = 0; j < m; ++j) {
    std::vector<cplx> w(n);
    op.apply(V[j], w);
    for (int i = 0; i <= j; ++i) {
      const cplx hij = vec_dot(V[i], w);
      H[i][j] = hij;
      for (std::size_t p = 0; p < n; ++p) w[p] -= hij * V[i][p];
    }
    const double hnext = vec_norm(w);
    H[j + 1][j] = hnext;

    for (int i = 0; i < j; ++i) {
      const cplx t = givens_c[i] * H[i][j] + givens_s[i] * H[i + 1][j];
      H[i + 1][j] = -std::conj(givens_s[i]) * H[i][j] + givens_c[i] * H[i + 1][j];
      H[i][j] = t;
    }
    make_givens(H[j][j], H[j + 1][j], givens_c[j], givens_s[j]);
    H[j][j] = givens_c[j] * H[j][j] + givens_s[j] * H[j + 1][j];
    H[j + 1][j] = cplx(0, 0);
    gvec[j + 1] = -std::conj(givens_s[j]) * gvec[j];
    gvec[j] = givens_c[j] * gvec[j];

    steps = j + 1;
    res = std::abs(gvec[j + 1]);
    if (hnext <= 1e-14 * beta) break;  // happy breakdown: subspace is invariant
    for (auto& z : w) z /= hnext;
    V.push_back(std::move(w));
  }

  // back substitution on the rotated Hessenberg system
  std::vector<cplx> y(steps);
  for (int i = steps - 1; i >= 0; --i) {
    cplx acc = gvec[i];
    for (int l = i + 1; l < steps; ++l) acc -= H[i][l] * y[l];
    y[i] = acc / H[i][i];
  }
  for (int i = 0; i < steps; ++i)
    for (std::size_t p = 0; p < n; ++p) u[p] += y[i] * V[i][p];
  return res;
}

SmootherSchedule build_smoother_schedule(const Hierarchy& hier, std::vector<double> alphas,
                                         bool level3_post_smoothing) {
  const int depth = hier.depth();
  if (depth < 2)
    throw std::invalid_argument("build_smoother_schedule: need at least two levels");
  if (alphas.empty()) alphas.assign(static_cast<std::size_t>(depth), 10.0);
  if (static_cast<int>(alphas.size()) != depth)
    throw std::invalid_argument("build_smoother_schedule: one alpha per level required");

  SmootherSchedule sched;
  sched.levels.resize(static_cast<std::size_t>(depth));
  for (int k = 0; k < depth; ++k) {
    LevelSmoother& ls = sched.levels[static_cast<std::size_t>(k)];
    if (k == 0) {
      // finest level: one damped-Jacobi step pre and post, with the weight from
      // the one-dimensional model at the largest local wavenumber
      ls.pre = ls.post = SmootherKind::Jacobi;
      ls.pre_steps = ls.post_steps = 1;
      const Level& lv = hier.levels[0];
      const double smax =
          std::sqrt(*std::max_element(lv.s2.v.begin(), lv.s2.v.end()));
      ls.jacobi_omega = jacobi_omega0(hier.omega * smax, lv.grid.h());
      continue;
    }
    const HelmholtzLevelOp op(hier, k);
    ls.cheby.alpha = alphas[static_cast<std::size_t>(k)];
    ls.cheby.lambda_max = estimate_lambda_max(op);
    if (k == depth - 1) {
      // coarsest level: a single 10-step Chebyshev stage
      ls.pre = SmootherKind::Chebyshev;
      ls.pre_steps = 10;
      ls.cheby.q_steps = 10;
      ls.post = SmootherKind::None;
      ls.post_steps = 0;
      continue;
    }
    ls.pre = (k == 2) ? SmootherKind::None : SmootherKind::Chebyshev;
    ls.pre_steps = (k == 2) ? 0 : 5;
    ls.post = (k == 2 && !level3_post_smoothing) ? SmootherKind::None : SmootherKind::Chebyshev;
    ls.post_steps = (ls.post == SmootherKind::None) ? 0 : 5;
    ls.cheby.q_steps = 5;
  }
  return sched;
}

SmootherSchedule with_alphas(SmootherSchedule schedule, const std::vector<double>& alphas) {
  if (alphas.size() != schedule.levels.size())
    throw std::invalid_argument("with_alphas: one alpha per level required");
  for (std::size_t k = 0; k < alphas.size(); ++k) schedule.levels[k].cheby.alpha = alphas[k];
  return schedule;
}

}  // namespace waveadr

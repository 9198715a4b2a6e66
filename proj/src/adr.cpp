#include "waveadr/adr.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "waveadr/smoothers.hpp"
#include "waveadr/transfer.hpp"

namespace waveadr {

void ADRLevelOp::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t m = grid.size();
  if (x.size() != m || y.size() != m)
    throw std::invalid_argument("ADRLevelOp::apply: vector length mismatch");
  const int n = grid.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = static_cast<std::size_t>(j) * n + i;
      cplx acc = cc[p] * x[p];
      if (i > 0) acc += cw[p] * x[p - 1];
      if (i + 1 < n) acc += ce[p] * x[p + 1];
      if (j > 0) acc += cs[p] * x[p - n];
      if (j + 1 < n) acc += cn[p] * x[p + n];
      y[p] = acc;
    }
  }
}

void ADRLevelOp::apply_adjoint(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t m = grid.size();
  if (x.size() != m || y.size() != m)
    throw std::invalid_argument("ADRLevelOp::apply_adjoint: vector length mismatch");
  const int n = grid.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = static_cast<std::size_t>(j) * n + i;
      cplx acc = std::conj(cc[p]) * x[p];
      if (i > 0) acc += std::conj(ce[p - 1]) * x[p - 1];
      if (i + 1 < n) acc += std::conj(cw[p + 1]) * x[p + 1];
      if (j > 0) acc += std::conj(cn[p - n]) * x[p - n];
      if (j + 1 < n) acc += std::conj(cs[p + n]) * x[p + n];
      y[p] = acc;
    }
  }
}

void ADRLevelOp::diagonal(std::span<cplx> d) const {
  if (d.size() != grid.size())
    throw std::invalid_argument("ADRLevelOp::diagonal: vector length mismatch");
  std::copy(cc.begin(), cc.end(), d.begin());
}

namespace {

void advection_entries(AdvectionScheme scheme, double tx, double ty, double h, double& aw,
                       double& ae, double& as, double& an, double& ac) {
  if (scheme == AdvectionScheme::Upwind) {
    aw = (-tx - std::abs(tx)) / (2.0 * h);
    ae = (tx - std::abs(tx)) / (2.0 * h);
    as = (-ty - std::abs(ty)) / (2.0 * h);
    an = (ty - std::abs(ty)) / (2.0 * h);
    ac = (std::abs(tx) + std::abs(ty)) / h;
  } else {
    aw = -tx / (2.0 * h);
    ae = tx / (2.0 * h);
    as = -ty / (2.0 * h);
    an = ty / (2.0 * h);
    ac = 0.0;
  }
}

void allocate_stencils(ADRLevelOp& op) {
  const std::size_t m = op.grid.size();
  op.cw.assign(m, cplx{});
  op.ce.assign(m, cplx{});
  op.cs.assign(m, cplx{});
  op.cn.assign(m, cplx{});
  op.cc.assign(m, cplx{});
  op.adv_w.assign(m, 0.0);
  op.adv_e.assign(m, 0.0);
  op.adv_s.assign(m, 0.0);
  op.adv_n.assign(m, 0.0);
  op.adv_c.assign(m, 0.0);
}

}  // namespace

ADRLevelOp build_adr_op(const Level& level, double omega, const PhaseField& phase,
                        AdvectionScheme scheme) {
  if (!(omega > 0.0)) throw std::invalid_argument("build_adr_op: omega must be positive");
  if (phase.grid != level.grid)
    throw std::invalid_argument("build_adr_op: phase data missing or on the wrong grid");
  const std::size_t m = level.grid.size();
  if (phase.tau.v.size() != m || phase.tau_x.v.size() != m || phase.tau_y.v.size() != m ||
      phase.lap_tau.v.size() != m || level.s2.v.size() != m || level.gamma.v.size() != m)
    throw std::invalid_argument("build_adr_op: incomplete phase or level data");

  ADRLevelOp op;
  op.grid = level.grid;
  op.omega = omega;
  allocate_stencils(op);

  const double h = level.grid.h();
  const double inv_h2 = 1.0 / (h * h);
  const cplx two_iw{0.0, 2.0 * omega};
  double worst = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    const double tx = phase.tau_x.v[p];
    const double ty = phase.tau_y.v[p];
    worst = std::max(worst, std::max(std::abs(tx), std::abs(ty)));
    double aw, ae, as, an, ac;
    advection_entries(scheme, tx, ty, h, aw, ae, as, an, ac);
    op.adv_w[p] = aw;
    op.adv_e[p] = ae;
    op.adv_s[p] = as;
    op.adv_n[p] = an;
    op.adv_c[p] = ac;
    op.cw[p] = -inv_h2 + two_iw * aw;
    op.ce[p] = -inv_h2 + two_iw * ae;
    op.cs[p] = -inv_h2 + two_iw * as;
    op.cn[p] = -inv_h2 + two_iw * an;
    const double grad2 = tx * tx + ty * ty;
    const double s2 = level.s2.v[p];
    op.cc[p] = 4.0 * inv_h2 + two_iw * ac +
               cplx{omega * omega * (grad2 - s2),
                    omega * phase.lap_tau.v[p] + omega * level.gamma.v[p] * s2};
  }
  op.max_abs_grad = worst;
  return op;
}

ADRLevelOp build_ray_op(const Level& level, double omega, double k1, double k2) {
  if (!(omega > 0.0)) throw std::invalid_argument("build_ray_op: omega must be positive");
  const std::size_t m = level.grid.size();
  if (level.s2.v.size() != m || level.gamma.v.size() != m)
    throw std::invalid_argument("build_ray_op: incomplete level data");

  ADRLevelOp op;
  op.grid = level.grid;
  op.omega = omega;
  allocate_stencils(op);

  const double h = level.grid.h();
  const double inv_h2 = 1.0 / (h * h);
  const cplx two_iw{0.0, 2.0 * omega};
  // the advection velocity of the factored amplitude is -k, and the upwind
  // orientation must follow it
  double aw, ae, as, an, ac;
  advection_entries(AdvectionScheme::Upwind, -k1, -k2, h, aw, ae, as, an, ac);
  for (std::size_t p = 0; p < m; ++p) {
    op.adv_w[p] = aw;
    op.adv_e[p] = ae;
    op.adv_s[p] = as;
    op.adv_n[p] = an;
    op.adv_c[p] = ac;
    op.cw[p] = -inv_h2 + two_iw * aw;
    op.ce[p] = -inv_h2 + two_iw * ae;
    op.cs[p] = -inv_h2 + two_iw * as;
    op.cn[p] = -inv_h2 + two_iw * an;
    op.cc[p] = 4.0 * inv_h2 + two_iw * ac +
               cplx{0.0, omega * level.gamma.v[p] * level.s2.v[p]};
  }
  op.max_abs_grad = std::max(std::abs(k1), std::abs(k2));
  return op;
}

ComplexField apply_variable_stencil(const ADRLevelOp& op, const ComplexField& a) {
  if (a.grid != op.grid)
    throw std::invalid_argument("apply_variable_stencil: grid mismatch");
  ComplexField out(op.grid);
  op.apply(a.v, out.v);
  return out;
}

double check_peclet(const ADRLevelOp& op) {
  return 2.0 * op.omega * op.grid.h() * op.max_abs_grad;
}

AdrMultigrid::AdrMultigrid(const Hierarchy& hier, int top_index, const PhaseField& phase,
                           AdvectionScheme scheme, ADRCycleConfig cfg)
    : cfg_(cfg) {
  if (top_index < 0 || top_index >= hier.depth())
    throw std::invalid_argument("AdrMultigrid: top level index out of range");
  if (phase.grid != hier.levels[static_cast<std::size_t>(top_index)].grid)
    throw std::invalid_argument("AdrMultigrid: phase is not sampled on the top level grid");
  if (cfg.smoother_steps < 1 || cfg.coarsest_steps < 1 || cfg.cycles < 1)
    throw std::invalid_argument("AdrMultigrid: step and cycle counts must be positive");

  for (int k = top_index; k < hier.depth(); ++k) {
    const Level& lv = hier.levels[static_cast<std::size_t>(k)];
    const PhaseField ph = (k == top_index) ? phase : restrict_phase(phase, lv.grid);
    ops_.push_back(build_adr_op(lv, hier.omega, ph, scheme));
  }

  const std::size_t m = phase.grid.size();
  modulate_.resize(m);
  demodulate_.resize(m);
  for (std::size_t p = 0; p < m; ++p) {
    modulate_[p] = std::polar(1.0, hier.omega * phase.tau.v[p]);
    demodulate_[p] = std::conj(modulate_[p]);
  }
}

AdrMultigrid::AdrMultigrid(std::vector<ADRLevelOp> ops, std::vector<cplx> modulate,
                           std::vector<cplx> demodulate, ADRCycleConfig cfg)
    : ops_(std::move(ops)), modulate_(std::move(modulate)), demodulate_(std::move(demodulate)),
      cfg_(cfg) {
  if (ops_.empty()) throw std::invalid_argument("AdrMultigrid: no level operators");
  if (modulate_.size() != ops_.front().grid.size() || demodulate_.size() != modulate_.size())
    throw std::invalid_argument("AdrMultigrid: modulation length mismatch");
  if (cfg.smoother_steps < 1 || cfg.coarsest_steps < 1 || cfg.cycles < 1)
    throw std::invalid_argument("AdrMultigrid: step and cycle counts must be positive");
}

void AdrMultigrid::vcycle(std::size_t k, const ComplexField& g, ComplexField& u) const {
  const ADRLevelOp& op = ops_[k];
  if (k + 1 == ops_.size()) {
    gmres_m(op, g.v, u.v, cfg_.coarsest_steps);
    return;
  }
  gmres_m(op, g.v, u.v, cfg_.smoother_steps);

  ComplexField r(op.grid);
  op.apply(u.v, r.v);
  for (std::size_t p = 0; p < r.v.size(); ++p) r.v[p] = g.v[p] - r.v[p];

  ComplexField rc = restrict_full_weighting(r);
  ComplexField ec(rc.grid);
  vcycle(k + 1, rc, ec);

  ComplexField ef(op.grid);
  prolong_bilinear(ec, ef);
  for (std::size_t p = 0; p < u.v.size(); ++p) u.v[p] += ef.v[p];

  gmres_m(op, g.v, u.v, cfg_.smoother_steps);
}

ComplexField AdrMultigrid::solve(const ComplexField& rhs) const {
  if (rhs.grid != ops_.front().grid)
    throw std::invalid_argument("AdrMultigrid::solve: right-hand side grid mismatch");
  ComplexField u(rhs.grid);
  for (int c = 0; c < cfg_.cycles; ++c) vcycle(0, rhs, u);
  return u;
}

ComplexField AdrMultigrid::correction(const ComplexField& residual) const {
  if (residual.grid != ops_.front().grid)
    throw std::invalid_argument("AdrMultigrid::correction: residual grid mismatch");
  ComplexField rhs(residual.grid);
  for (std::size_t p = 0; p < rhs.v.size(); ++p) rhs.v[p] = residual.v[p] * modulate_[p];
  ComplexField a = solve(rhs);
  for (std::size_t p = 0; p < a.v.size(); ++p) a.v[p] *= demodulate_[p];
  return a;
}

}  // namespace waveadr

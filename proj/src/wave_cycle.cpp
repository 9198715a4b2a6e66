#include "waveadr/wave_cycle.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "waveadr/transfer.hpp"

namespace waveadr {

int select_adr_level(const Hierarchy& hier) {
  int best = -1;
  double best_dist = 1e300;
  for (int l = 2; l <= hier.depth() - 1; ++l) {
    const double wh = hier.omega * hier.levels[static_cast<std::size_t>(l - 1)].grid.h();
    if (wh < 0.5 || wh > 1.5) continue;
    const double d = std::abs(wh - 1.0);
    if (d < best_dist) {
      best_dist = d;
      best = l;
    }
  }
  if (best < 0)
    throw std::invalid_argument(
        "select_adr_level: no level has mesh frequency omega*h within [0.5, 1.5]");
  return best;
}

WaveADRPreconditioner::WaveADRPreconditioner(const Hierarchy& hier,
                                             const PhaseField& finest_phase,
                                             SmootherSchedule schedule, WaveADRConfig cfg)
    : hier_(&hier), sched_(std::move(schedule)), cfg_(cfg) {
  const int depth = hier.depth();
  if (depth < 3)
    throw std::invalid_argument("WaveADRPreconditioner: need at least three levels");
  if (static_cast<int>(sched_.levels.size()) != depth)
    throw std::invalid_argument("WaveADRPreconditioner: schedule depth mismatch");
  if (finest_phase.grid != hier.levels[0].grid)
    throw std::invalid_argument("WaveADRPreconditioner: phase is not on the finest grid");
  if (cfg_.adr_level < 2 || cfg_.adr_level > depth - 1)
    throw std::invalid_argument(
        "WaveADRPreconditioner: correction level must be an intermediate level");
  const double wh =
      hier.omega * hier.levels[static_cast<std::size_t>(cfg_.adr_level - 1)].grid.h();
  if (wh < 0.5 || wh > 1.5)
    throw std::invalid_argument(
        "WaveADRPreconditioner: correction level mesh frequency outside [0.5, 1.5]");
  if (cfg_.adr_steps < 0)
    throw std::invalid_argument("WaveADRPreconditioner: correction step count must be >= 0");

  adr_idx_ = static_cast<std::size_t>(cfg_.adr_level - 1);
  ops_.reserve(static_cast<std::size_t>(depth));
  for (int k = 0; k < depth; ++k) ops_.emplace_back(hier, k);

  adr_phase_ = restrict_phase(finest_phase, hier.levels[adr_idx_].grid);
  adr_ = std::make_unique<AdrMultigrid>(hier, static_cast<int>(adr_idx_), adr_phase_,
                                        cfg_.adr_scheme, cfg_.adr);
}

namespace {

void run_smoother(const LevelSmoother& ls, bool pre, const HelmholtzLevelOp& op,
                  const ComplexField& g, ComplexField& u) {
  const SmootherKind kind = pre ? ls.pre : ls.post;
  const int steps = pre ? ls.pre_steps : ls.post_steps;
  switch (kind) {
    case SmootherKind::None:
      return;
    case SmootherKind::Jacobi:
      jacobi_sweep(op, g.v, u.v, ls.jacobi_omega, steps);
      return;
    case SmootherKind::Chebyshev: {
      ChebyParams p = ls.cheby;
      p.q_steps = steps;
      chebyshev_semi_sweep(op, g.v, u.v, p);
      return;
    }
  }
}

}  // namespace

void schedule_vcycle(const std::vector<HelmholtzLevelOp>& ops, const SmootherSchedule& sched,
                     std::size_t k, const ComplexField& g, ComplexField& u,
                     std::size_t hook_level,
                     const std::function<void(const ComplexField&, ComplexField&)>& hook) {
  const LevelSmoother& ls = sched.levels[k];
  const HelmholtzLevelOp& op = ops[k];

  if (k + 1 == ops.size()) {
    run_smoother(ls, /*pre=*/true, op, g, u);  // coarsest: one Chebyshev stage, done
    return;
  }

  run_smoother(ls, /*pre=*/true, op, g, u);

  ComplexField r(op.grid());
  op.apply(u.v, r.v);
  for (std::size_t p = 0; p < r.v.size(); ++p) r.v[p] = g.v[p] - r.v[p];
  ComplexField rc = restrict_full_weighting(r);
  ComplexField ec(rc.grid);
  schedule_vcycle(ops, sched, k + 1, rc, ec, hook_level, hook);
  ComplexField ef(op.grid());
  prolong_bilinear(ec, ef);
  for (std::size_t p = 0; p < u.v.size(); ++p) u.v[p] += ef.v[p];

  run_smoother(ls, /*pre=*/false, op, g, u);

  if (k == hook_level && hook) hook(g, u);
}

void WaveADRPreconditioner::cycle(const ComplexField& g, ComplexField& u) const {
  if (g.grid != hier_->levels[0].grid || u.grid != g.grid)
    throw std::invalid_argument("WaveADRPreconditioner::cycle: fields not on the finest grid");
  const std::size_t hook_level = cfg_.adr_steps > 0 ? adr_idx_ : ops_.size();
  schedule_vcycle(ops_, sched_, 0, g, u, hook_level,
                  [this](const ComplexField& gl, ComplexField& ul) {
                    const HelmholtzLevelOp& op = ops_[adr_idx_];
                    ComplexField r(op.grid());
                    for (int m = 0; m < cfg_.adr_steps; ++m) {
                      op.apply(ul.v, r.v);
                      for (std::size_t p = 0; p < r.v.size(); ++p) r.v[p] = gl.v[p] - r.v[p];
                      const ComplexField e = adr_->correction(r);
                      for (std::size_t p = 0; p < ul.v.size(); ++p) ul.v[p] += e.v[p];
                    }
                  });
}

ComplexField WaveADRPreconditioner::apply(const ComplexField& r) const {
  ComplexField u(r.grid);
  cycle(r, u);
  return u;
}

}  // namespace waveadr

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "waveadr/adr.hpp"
#include "waveadr/eikonal.hpp"
#include "waveadr/field.hpp"
#include "waveadr/helmholtz.hpp"
#include "waveadr/hierarchy.hpp"
#include "waveadr/smoothers.hpp"

namespace waveadr {

/// One recursive V-cycle over the per-level operators, driven by the smoother
/// schedule (the coarsest level runs its pre stage and returns). After the
/// post-smoothing of level `hook_level` (zero-based) the `hook` is invoked
/// with that level's right-hand side and iterate, which is where correcting
/// preconditioners insert their own step; pass hook_level >= ops.size() to
/// run the plain cycle.
void schedule_vcycle(const std::vector<HelmholtzLevelOp>& ops, const SmootherSchedule& sched,
                     std::size_t k, const ComplexField& g, ComplexField& u,
                     std::size_t hook_level,
                     const std::function<void(const ComplexField&, ComplexField&)>& hook);

struct WaveADRConfig {
  int adr_level = 2;   // 1-based hierarchy level carrying the amplitude correction
  int adr_steps = 8;   // correction repetitions M per cycle; 0 = pure wave cycle (ablation)
  bool level3_post_smoothing = true;  // turn off to skip the level-3 post stage
  ADRCycleConfig adr;
  AdvectionScheme adr_scheme = AdvectionScheme::Upwind;
};

/// 1-based hierarchy level whose mesh frequency omega*h lies closest to 1,
/// searched over levels 2..depth-1 and required to fall within [0.5, 1.5].
int select_adr_level(const Hierarchy& hier);

/**
 * Recursive V-cycle combining the per-level wave smoothers with phase-modulated
 * amplitude corrections on the level where omega*h is near 1:
 *
 *   pre:  level 1 damped Jacobi (1 step); coarsest level 10 Chebyshev steps and
 *         return; level 3 nothing; other levels 5 Chebyshev steps
 *   then  restrict the residual, recurse from a zero coarse guess, prolongate
 *   post: level 1 damped Jacobi (1 step); other levels 5 Chebyshev steps; on
 *         the correction level additionally M repetitions of {fresh residual,
 *         amplitude correction, add}
 *
 * Used as a right preconditioner: apply() runs one cycle from zero. All state
 * is fixed at construction, so applications are deterministic and may run
 * concurrently on separate right-hand sides.
 */
class WaveADRPreconditioner {
 public:
  WaveADRPreconditioner(const Hierarchy& hier, const PhaseField& finest_phase,
                        SmootherSchedule schedule, WaveADRConfig cfg = {});

  /// One V-cycle for A u = g improving u in place (level 1 entry point).
  void cycle(const ComplexField& g, ComplexField& u) const;

  /// r -> one cycle from a zero start; the preconditioner map.
  ComplexField apply(const ComplexField& r) const;

  const Hierarchy& hierarchy() const { return *hier_; }
  const HelmholtzLevelOp& level_op(std::size_t k) const { return ops_.at(k); }
  const AdrMultigrid& amplitude_solver() const { return *adr_; }
  const SmootherSchedule& schedule() const { return sched_; }
  const WaveADRConfig& config() const { return cfg_; }
  /// Phase restricted to the correction level's grid.
  const PhaseField& correction_phase() const { return adr_phase_; }

 private:
  const Hierarchy* hier_;
  SmootherSchedule sched_;
  WaveADRConfig cfg_;
  std::vector<HelmholtzLevelOp> ops_;
  PhaseField adr_phase_;
  std::unique_ptr<AdrMultigrid> adr_;
  std::size_t adr_idx_ = 1;  // 0-based index of the correction level
};

}  // namespace waveadr

#pragma once

#include <functional>
#include <vector>

#include "waveadr/adr.hpp"
#include "waveadr/field.hpp"
#include "waveadr/helmholtz.hpp"
#include "waveadr/hierarchy.hpp"
#include "waveadr/linear_op.hpp"
#include "waveadr/smoothers.hpp"
#include "waveadr/wave_cycle.hpp"

namespace waveadr {

struct FgmresConfig {
  int restart = 20;       // Arnoldi block length before the method restarts
  double tol = 1e-6;      // relative residual ||g - A u|| / ||g|| at exit
  int max_iter = 2000;    // total preconditioned iterations across restarts
};

struct FgmresResult {
  ComplexField u;               // final iterate (zero field if never updated)
  std::vector<double> history;  // relative residual per iteration, starts at 1.0
  bool converged = false;
  int iterations = 0;           // preconditioner applications consumed
};

/// Right preconditioner signature: maps a residual field to a correction.
using Preconditioner = std::function<ComplexField(const ComplexField&)>;

/**
 * Flexible restarted GMRES for A u = g with a right preconditioner applied to
 * every Krylov vector (the preconditioned vectors are stored, so the map may
 * vary per application and still yields the minimal-residual iterate). Starts
 * from u = 0. Exhausting max_iter returns the best iterate with
 * converged = false rather than throwing.
 */
FgmresResult fgmres(const LinearOperator& a, const Preconditioner& precond,
                    const ComplexField& g, FgmresConfig cfg = {});

/// Unpreconditioned variant: restarted GMRES on A u = g.
FgmresResult fgmres(const LinearOperator& a, const ComplexField& g, FgmresConfig cfg = {});

/**
 * Classical shifted-operator preconditioner: one V-cycle of damped Jacobi
 * multigrid (omega = 2/3, one pre- and one post-sweep on every level, ten
 * GMRES steps on the coarsest) applied to the Helmholtz operator with a
 * constant imaginary diagonal shift i*beta, from a zero start. The shift
 * moves the spectrum off the origin so plain multigrid contracts.
 */
class ShiftedLaplacianPreconditioner {
 public:
  ShiftedLaplacianPreconditioner(const Hierarchy& hier, double beta);

  ComplexField apply(const ComplexField& r) const;

  double beta() const { return beta_; }
  const HelmholtzLevelOp& level_op(std::size_t k) const { return ops_.at(k); }

 private:
  void vcycle(std::size_t k, const ComplexField& g, ComplexField& u) const;

  const Hierarchy* hier_;
  double beta_;
  std::vector<HelmholtzLevelOp> ops_;
};

struct WaveRayConfig {
  int rays = 8;  // plane-wave directions theta_m = (m-1) * 2*pi / rays
  ADRCycleConfig ray_cycle;
};

/**
 * Plane-wave ancestor of the amplitude correction: one wave V-cycle with, at
 * the omega*h ~ 1 level, a sum of M directional corrections. For each ray
 * direction k_m = (cos theta_m, sin theta_m) the level residual is
 * demodulated by e^{-i omega (k_m . x)}, the constant-advection ray equation
 *   +Lap a + 2i omega (k_m . grad a) + i omega gamma s^2 a = r_m
 * is solved approximately by one upwind V-cycle, and the remodulated
 * corrections of all rays are accumulated onto the iterate.
 */
class WaveRayPreconditioner {
 public:
  WaveRayPreconditioner(const Hierarchy& hier, SmootherSchedule schedule,
                        WaveRayConfig cfg = {});

  ComplexField apply(const ComplexField& r) const;

  const WaveRayConfig& config() const { return cfg_; }
  int correction_level() const { return static_cast<int>(ray_idx_) + 1; }
  const AdrMultigrid& ray_solver(std::size_t m) const { return rays_.at(m); }

 private:
  const Hierarchy* hier_;
  SmootherSchedule sched_;
  WaveRayConfig cfg_;
  std::vector<HelmholtzLevelOp> ops_;
  std::vector<AdrMultigrid> rays_;
  std::size_t ray_idx_ = 1;  // 0-based index of the correction level
};

}  // namespace waveadr

#pragma once

#include <vector>

#include "waveadr/eikonal.hpp"
#include "waveadr/field.hpp"
#include "waveadr/hierarchy.hpp"
#include "waveadr/linear_op.hpp"

namespace waveadr {

enum class AdvectionScheme {
  Upwind,   // production scheme: first-order, sign-stable at any Peclet number
  Central,  // second-order central differences; kept only for ablation studies
};

/**
 * Variable five-point stencil operator for the amplitude equation
 *
 *   -Lap a + 2iw (grad tau . grad a) + iw (Lap tau) a
 *          + w^2 (|grad tau|^2 - s^2) a + iw gamma s^2 a = rhs.
 *
 * The advection term uses per-node upwinding chosen by the sign of tau_x and
 * tau_y. The composite stencil is stored as five coefficient fields (west,
 * east, south, north, center); the advection-only part is kept separately so
 * its sign structure and zero row sums stay observable.
 */
class ADRLevelOp final : public LinearOperator {
 public:
  ADRLevelOp() = default;

  std::size_t size() const override { return grid.size(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void apply_adjoint(std::span<const cplx> x, std::span<cplx> y) const override;
  void diagonal(std::span<cplx> d) const override;

  Grid2D grid;
  double omega = 0.0;
  double max_abs_grad = 0.0;  // max over nodes of max(|tau_x|, |tau_y|)

  // composite stencil: y(i,j) = cc*x(i,j) + cw*x(i-1,j) + ce*x(i+1,j)
  //                            + cs*x(i,j-1) + cn*x(i,j+1), zero outside
  std::vector<cplx> cw, ce, cs, cn, cc;

  // advection stencil alone (before the 2iw factor): row sums vanish,
  // off-diagonal entries are <= 0 and the diagonal entry is >= 0
  std::vector<double> adv_w, adv_e, adv_s, adv_n, adv_c;
};

/// Assembles the amplitude operator on one hierarchy level from the phase
/// sampled on that level's grid. Throws if the phase data is missing or lives
/// on a different grid.
ADRLevelOp build_adr_op(const Level& level, double omega, const PhaseField& phase,
                        AdvectionScheme scheme = AdvectionScheme::Upwind);

/// Ray-amplitude operator for one plane-wave direction (k1, k2), |k| = 1:
///   -Lap a - 2iw (k . grad a) + iw gamma s^2 a,
/// the constant-advection system obtained by factoring u = a * e^{+iw k.x}
/// out of the damped Helmholtz operator (the phase reaction term is dropped).
/// Upwinding follows the advection velocity -k.
ADRLevelOp build_ray_op(const Level& level, double omega, double k1, double k2);

/// out = sum of the five coefficient fields times the shifted input.
ComplexField apply_variable_stencil(const ADRLevelOp& op, const ComplexField& a);

/// Mesh Peclet number 2*w*h*max(|tau_x|,|tau_y|); central differencing of the
/// advection term is stable only when this is <= 2, upwinding always is.
double check_peclet(const ADRLevelOp& op);

struct ADRCycleConfig {
  int smoother_steps = 3;    // GMRES step count for pre/post smoothing
  int coarsest_steps = 10;   // GMRES step count on the coarsest grid
  int cycles = 1;            // V-cycles per solve
  double target = 0.1;       // design accuracy of the approximate solve
};

/**
 * Multigrid V-cycle solver for the amplitude system on one hierarchy tail:
 * GMRES(3) pre/post smoothing, full-weighting restriction, re-discretized
 * coarse operators with injected phase, bilinear prolongation, GMRES(10) on
 * the coarsest grid. Also owns the phase modulation used to turn a wave-field
 * residual into an amplitude right-hand side and back.
 */
class AdrMultigrid {
 public:
  /// Builds operators for hierarchy levels top_index..deepest (top_index is a
  /// zero-based index into hier.levels); `phase` must be sampled on the top
  /// level's grid.
  AdrMultigrid(const Hierarchy& hier, int top_index, const PhaseField& phase,
               AdvectionScheme scheme, ADRCycleConfig cfg);

  /// Shared-machinery constructor from prebuilt per-level operators plus the
  /// top-level modulation factors e^{+i w tau} and e^{-i w tau}.
  AdrMultigrid(std::vector<ADRLevelOp> ops, std::vector<cplx> modulate,
               std::vector<cplx> demodulate, ADRCycleConfig cfg);

  const ADRLevelOp& top_op() const { return ops_.front(); }
  const ADRLevelOp& op_at(std::size_t k) const { return ops_.at(k); }
  std::size_t depth() const { return ops_.size(); }
  const ADRCycleConfig& config() const { return cfg_; }

  /// Top-grid factors applied to the residual (modulation) and to the solved
  /// amplitude (demodulation); their pointwise product is 1 (unimodular pair).
  const std::vector<cplx>& modulation() const { return modulate_; }
  const std::vector<cplx>& demodulation() const { return demodulate_; }

  /// Approximate amplitude solve from a zero start (cfg.cycles V-cycles).
  ComplexField solve(const ComplexField& rhs) const;

  /// Full correction step: rhs = r * e^{+i w tau}, solve, return a * e^{-i w tau}.
  ComplexField correction(const ComplexField& residual) const;

 private:
  void vcycle(std::size_t k, const ComplexField& g, ComplexField& u) const;

  std::vector<ADRLevelOp> ops_;
  std::vector<cplx> modulate_, demodulate_;
  ADRCycleConfig cfg_;
};

}  // namespace waveadr

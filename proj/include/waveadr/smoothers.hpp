#pragma once

#include <vector>

#include "waveadr/hierarchy.hpp"
#include "waveadr/linear_op.hpp"

namespace waveadr {

/// Chebyshev semi-iteration parameters on the normal equations: the iteration
/// damps the window [lambda_max/alpha, lambda_max] of the A*A spectrum.
struct ChebyParams {
  double alpha = 10.0;      // > 1, window divisor
  double lambda_max = 1.0;  // > 0, estimated largest eigenvalue of A*A
  int q_steps = 5;          // 5 on intermediate levels, 10 on the coarsest
};

/// Reciprocal step sizes 1/beta_q, q = 0..q_steps-1: the Chebyshev roots of
/// the window, lambda_max((1+1/alpha)/2 + (1-1/alpha)/2 * cos(pi(2q+1)/(2Q))).
std::vector<double> chebyshev_inverse_betas(const ChebyParams& p);

/// u <- u + omega D^{-1}(g - A u), repeated `steps` times.
void jacobi_sweep(const LinearOperator& op, std::span<const cplx> g, std::span<cplx> u,
                  double omega, int steps);

/// Largest eigenvalue of A*A by 30 fixed-seed power iterations on x -> A*(Ax),
/// returned as the final Rayleigh quotient inflated by 1.05.
double estimate_lambda_max(const LinearOperator& op);

/// q_steps iterations of u <- u + beta_q (A*g - A*(Au)); the error after the
/// sweep is p(A*A) e0 with p the window polynomial normalized to p(0) = 1.
void chebyshev_semi_sweep(const LinearOperator& op, std::span<const cplx> g, std::span<cplx> u,
                          const ChebyParams& params);

/// m Arnoldi steps of (non-restarted) GMRES from the initial guess in u,
/// minimizing ||g - A u|| over the Krylov subspace; complex arithmetic,
/// modified Gram-Schmidt. Returns the residual-norm estimate at exit.
double gmres_m(const LinearOperator& op, std::span<const cplx> g, std::span<cplx> u, int m);

// ---- Per-level smoother schedule ---------------------------------------------

enum class SmootherKind { None, Jacobi, Chebyshev };

struct LevelSmoother {
  SmootherKind pre = SmootherKind::Chebyshev;
  SmootherKind post = SmootherKind::Chebyshev;
  int pre_steps = 5;
  int post_steps = 5;
  double jacobi_omega = 2.0 / 3.0;  // damped-Jacobi weight (finest level only)
  ChebyParams cheby;                // lambda_max estimated once at build time
};

/// Finest level first. The standard shape: level 1 runs damped Jacobi with one
/// step pre and post; level 3 skips pre-smoothing; the coarsest level runs 10
/// Chebyshev steps (as its "pre" stage, the cycle returns right after);
/// intermediate levels run 5 Chebyshev steps pre and post.
struct SmootherSchedule {
  std::vector<LevelSmoother> levels;
};

/// Builds the standard schedule for the hierarchy. alphas supplies the
/// Chebyshev window divisor per level (empty selects 10 everywhere; otherwise
/// one entry per level, entries for non-Chebyshev levels ignored). The largest
/// normal-equation eigenvalue is estimated per level here and cached, so later
/// alpha changes need no re-estimation. level3_post_smoothing = false turns
/// off the post stage on level 3.
SmootherSchedule build_smoother_schedule(const Hierarchy& hier, std::vector<double> alphas = {},
                                         bool level3_post_smoothing = true);

/// Copy of the schedule with the Chebyshev alphas replaced level by level;
/// cached lambda_max values are kept.
SmootherSchedule with_alphas(SmootherSchedule schedule, const std::vector<double>& alphas);

}  // namespace waveadr

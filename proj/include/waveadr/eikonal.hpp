#pragma once

#include "waveadr/field.hpp"

namespace waveadr {

struct NodeIndex {
  int i = 0;
  int j = 0;
  bool operator==(const NodeIndex&) const = default;
};

// Travel-time field tau with its first derivatives and Laplacian, produced by
// the factored fast-marching solver. The factorization tau = tau0 * tau1 with
// tau0(x) = |x - x0| keeps the numerically computed factor tau1 smooth at the
// point source, so the assembled derivatives stay finite everywhere.
struct PhaseField {
  Grid2D grid;
  RealField tau;      // travel time, tau >= 0, tau(x0) = 0
  RealField tau_x;    // d tau / dx
  RealField tau_y;    // d tau / dy
  RealField lap_tau;  // Laplacian of tau
  NodeIndex source;
};

// First-order factored fast marching: solves |grad tau| = s with tau(x0) = 0.
// Nodes are frozen in nondecreasing tau order (violations throw); the local
// solver is the two-neighbor upwind quadratic applied to the factored unknown
// tau1, with tau1(x0) = s(x0). Derivatives of tau1 use central differences in
// the interior and one-sided first-order differences on the boundary; the
// analytic tau0 derivatives are singular at the source node, where the
// assembled values are replaced by the average of the 4 grid neighbors.
PhaseField solve_factored_eikonal(const SlownessModel& s, NodeIndex source);

// Samples tau and its derivative fields at the coarse nodes of a nested
// coarsening (coarse node I lies on fine node 2I+1, possibly iterated).
// Throws if `target` is not reachable from p.grid by repeated halving.
PhaseField restrict_phase(const PhaseField& p, const Grid2D& target);

}  // namespace waveadr

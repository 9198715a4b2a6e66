#pragma once

#include <string>
#include <vector>

#include "waveadr/eikonal.hpp"
#include "waveadr/field.hpp"
#include "waveadr/hierarchy.hpp"
#include "waveadr/smoothers.hpp"
#include "waveadr/wave_cycle.hpp"

namespace waveadr {

/**
 * Derivative-free selection of the per-level Chebyshev window divisor alpha.
 * The objective is the squared relative residual left by a fixed number of
 * wave cycles run from a zero start on a seed right-hand side; a coordinate
 * descent over the Chebyshev levels (coarse to fine) scans a candidate grid
 * and then refines the best candidate by golden-section steps.
 */
struct TunerConfig {
  int cycles = 3;  // wave cycles per loss evaluation
  std::vector<double> grid = {1.2, 2.0, 3.0, 4.6, 7.1, 10.0, 30.0};
  int golden_passes = 2;  // bracket-shrinking steps after the grid scan
  int sweeps = 1;         // full coordinate-descent passes over the levels
};

/// Everything one loss evaluation needs. The schedule carries the cached
/// spectral estimates, so swapping alphas never re-runs power iteration.
struct TunerProblem {
  const Hierarchy* hier = nullptr;
  const PhaseField* phase = nullptr;
  SmootherSchedule schedule;
  WaveADRConfig cycle;
  ComplexField rhs;
};

/// Builds the standard problem: default schedule for the hierarchy and a
/// centered point source on the finest grid.
TunerProblem make_tuner_problem(const Hierarchy& hier, const PhaseField& phase,
                                WaveADRConfig cycle = {});

/// ||g - A u^(K)||^2 / ||g||^2 after k_cycles wave cycles from zero, with the
/// schedule's alphas replaced level by level. k_cycles = 0 returns exactly 1;
/// a non-finite iterate returns +infinity.
double cycle_loss(const TunerProblem& prob, const std::vector<double>& alphas, int k_cycles);

struct TuneResult {
  std::vector<double> alphas;  // one entry per level (non-Chebyshev levels keep their default)
  double loss = 1.0;           // loss of the returned assignment
  int evaluations = 0;         // number of cycle_loss calls spent
};

/// Coordinate descent: seeds with the best uniform candidate, then per level
/// (coarsest first) scans the grid and refines with golden-section steps.
/// Deterministic; never returns an assignment with higher loss than the best
/// uniform candidate. Throws if every candidate at some stage diverges.
TuneResult tune_alphas(const TunerProblem& prob, TunerConfig cfg = {});

/// Comma-separated text form with enough digits to round-trip exactly.
std::string format_alphas(const std::vector<double>& alphas);
std::vector<double> parse_alphas(const std::string& text);

}  // namespace waveadr

#include "waveadr/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace waveadr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Front {
  const Grid2D grid;
  const NodeIndex src;
  const double sx0, sy0;  // source coordinates

  double tau0(int i, int j) const {
    return std::hypot(grid.coord(i) - sx0, grid.coord(j) - sy0);
  }
  double gx0(int i, int j) const {
    const double r = tau0(i, j);
    return r == 0.0 ? 0.0 : (grid.coord(i) - sx0) / r;
  }
  double gy0(int i, int j) const {
    const double r = tau0(i, j);
    return r == 0.0 ? 0.0 : (grid.coord(j) - sy0) / r;
  }
};

// One upwind axis contribution (p*t + q) to the factored local solver.
struct AxisTerm {
  bool used = false;
  double p = 0.0;
  double q = 0.0;
  double sigma = 0.0;
  double nb_tau = 0.0;  // arrival time of the frozen neighbor feeding this axis
};

}  // namespace

PhaseField solve_factored_eikonal(const SlownessModel& s, NodeIndex source) {
  const Grid2D& grid = s.grid;
  const int n = grid.n;
  if (grid.size() == 0 || s.s.grid != grid)
    throw std::invalid_argument("solve_factored_eikonal: slowness model is incomplete");
  if (source.i < 0 || source.i >= n || source.j < 0 || source.j >= n)
    throw std::out_of_range("solve_factored_eikonal: source node outside the grid");
  for (double v : s.s.v)
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument("solve_factored_eikonal: slowness must be finite and positive");

  const double h = grid.h();
  const Front f{grid, source, grid.coord(source.i), grid.coord(source.j)};
  const std::size_t nn = grid.size();
  const auto flat = [n](int i, int j) { return static_cast<std::size_t>(j) * n + i; };
  // The factored march freezes nodes in nondecreasing arrival order only up to
  // the scheme's local truncation (the analytic d tau0 differs from its grid
  // difference at O(h^2)), so the monotonicity guard gets that much slack.
  const double order_slack =
      10.0 * h * h * *std::max_element(s.s.v.begin(), s.s.v.end());

  std::vector<double> tau1(nn, kInf);
  std::vector<char> frozen(nn, 0);

  // Local solver: determine tau1 at (i, j) from frozen axis neighbors.
  // Each axis contributes (p*t + q) ~ d tau/d axis with p = sigma*tau0/h + g_axis
  // and q = -sigma*tau0*t_nb/h; the eikonal equation sum (p t + q)^2 = s^2 is
  // solved for the largest root, falling back to single-axis updates when the
  // two-axis root is complex or breaks upwinding.
  const auto local_solve = [&](int i, int j) -> double {
    const double t0 = f.tau0(i, j);
    const double sij = s.s.at(i, j);
    AxisTerm ax[2];
    const double g[2] = {f.gx0(i, j), f.gy0(i, j)};
    for (int axis = 0; axis < 2; ++axis) {
      const int di = axis == 0 ? 1 : 0;
      const int dj = axis == 0 ? 0 : 1;
      // sigma = +1 for the lower-index neighbor, -1 for the higher-index one
      for (double sigma : {1.0, -1.0}) {
        const int ni = i - static_cast<int>(sigma) * di;
        const int nj = j - static_cast<int>(sigma) * dj;
        if (ni < 0 || ni >= n || nj < 0 || nj >= n) continue;
        const std::size_t np = flat(ni, nj);
        if (!frozen[np]) continue;
        const double nb_tau = f.tau0(ni, nj) * tau1[np];
        if (ax[axis].used && ax[axis].nb_tau <= nb_tau) continue;
        ax[axis].used = true;
        ax[axis].sigma = sigma;
        ax[axis].p = sigma * t0 / h + g[axis];
        ax[axis].q = -sigma * t0 * tau1[np] / h;
        ax[axis].nb_tau = nb_tau;
      }
    }
    if (!ax[0].used && !ax[1].used) return kInf;

    const double eps = 1e-12 * (1.0 + sij);
    const auto upwind_ok = [&](double t) {
      if (!(t > 0.0) || !std::isfinite(t)) return false;
      for (const AxisTerm& a : ax)
        if (a.used && a.sigma * (a.p * t + a.q) < -eps) return false;
      return true;
    };

    if (ax[0].used && ax[1].used) {
      const double a = ax[0].p * ax[0].p + ax[1].p * ax[1].p;
      const double b = ax[0].p * ax[0].q + ax[1].p * ax[1].q;
      const double c = ax[0].q * ax[0].q + ax[1].q * ax[1].q - sij * sij;
      const double disc = b * b - a * c;
      if (a > 0.0 && disc >= 0.0) {
        const double t = (-b + std::sqrt(disc)) / a;
        if (upwind_ok(t)) return t;
      }
    }
    // single-axis fallbacks: sigma*(p t + q) = s, take the best valid arrival
    double best = kInf;
    for (const AxisTerm& a : ax) {
      if (!a.used) continue;
      double t;
      if (std::abs(a.p) > 1e-300) {
        t = (a.sigma * sij - a.q) / a.p;
      } else {
        t = (a.nb_tau + h * sij) / t0;  // unfactored one-sided update
      }
      if (!(t > 0.0) || !std::isfinite(t)) continue;
      const double arrival = t0 * t;
      if (arrival + eps < a.nb_tau) continue;  // cannot arrive before the feeder
      best = std::min(best, t);
    }
    if (best == kInf) {
      // guaranteed-progress fallback keeps the march monotone
      double nbmin = kInf;
      for (const AxisTerm& a : ax)
        if (a.used) nbmin = std::min(nbmin, a.nb_tau);
      best = (nbmin + h * sij) / t0;
    }
    return best;
  };

  // min-heap keyed by full arrival time tau = tau0*tau1, with lazy deletion
  using Entry = std::tuple<double, double, std::size_t>;  // (tau, tau1 at push, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

  tau1[flat(source.i, source.j)] = s.s.at(source.i, source.j);
  frozen[flat(source.i, source.j)] = 1;
  double last_frozen = 0.0;
  std::size_t frozen_count = 1;

  const auto push_trial = [&](int i, int j) {
    if (i < 0 || i >= n || j < 0 || j >= n) return;
    const std::size_t p = flat(i, j);
    if (frozen[p]) return;
    const double t = local_solve(i, j);
    if (t < tau1[p]) {
      tau1[p] = t;
      heap.emplace(f.tau0(i, j) * t, t, p);
    }
  };

  push_trial(source.i - 1, source.j);
  push_trial(source.i + 1, source.j);
  push_trial(source.i, source.j - 1);
  push_trial(source.i, source.j + 1);

  while (!heap.empty()) {
    const auto [key, t_at_push, p] = heap.top();
    heap.pop();
    if (frozen[p] || t_at_push != tau1[p]) continue;  // stale entry
    if (key < last_frozen - order_slack)
      throw std::logic_error("solve_factored_eikonal: causality violated during the march");
    frozen[p] = 1;
    last_frozen = std::max(last_frozen, key);
    ++frozen_count;
    const int i = static_cast<int>(p % n);
    const int j = static_cast<int>(p / n);
    push_trial(i - 1, j);
    push_trial(i + 1, j);
    push_trial(i, j - 1);
    push_trial(i, j + 1);
  }
  if (frozen_count != nn)
    throw std::logic_error("solve_factored_eikonal: march terminated before covering the grid");

  // Assemble tau and its derivatives from the factorization.
  PhaseField out;
  out.grid = grid;
  out.source = source;
  out.tau = RealField(grid);
  out.tau_x = RealField(grid);
  out.tau_y = RealField(grid);
  out.lap_tau = RealField(grid);

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out.tau.at(i, j) = f.tau0(i, j) * tau1[flat(i, j)];
  out.tau.at(source.i, source.j) = 0.0;

  // central differences for tau1 inside, one-sided first order on the boundary
  const auto d1 = [&](auto&& value, int i, int lo, int hi) {
    if (i > lo && i < hi) return (value(i + 1) - value(i - 1)) / (2.0 * h);
    if (i == lo) return (value(i + 1) - value(i)) / h;
    return (value(i) - value(i - 1)) / h;
  };
  const auto d2 = [&](auto&& value, int i, int lo, int hi) {
    if (i > lo && i < hi) return (value(i - 1) - 2.0 * value(i) + value(i + 1)) / (h * h);
    if (i == lo) return (value(i) - 2.0 * value(i + 1) + value(i + 2)) / (h * h);
    return (value(i) - 2.0 * value(i - 1) + value(i - 2)) / (h * h);
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double t1 = tau1[flat(i, j)];
      const double t0 = f.tau0(i, j);
      const double t1x = d1([&](int a) { return tau1[flat(a, j)]; }, i, 0, n - 1);
      const double t1y = d1([&](int a) { return tau1[flat(i, a)]; }, j, 0, n - 1);
      const double t1lap = d2([&](int a) { return tau1[flat(a, j)]; }, i, 0, n - 1) +
                           d2([&](int a) { return tau1[flat(i, a)]; }, j, 0, n - 1);
      const double gx = f.gx0(i, j), gy = f.gy0(i, j);
      out.tau_x.at(i, j) = t0 * t1x + t1 * gx;
      out.tau_y.at(i, j) = t0 * t1y + t1 * gy;
      // lap tau0 = 1/r in 2D; the source row is overwritten below
      const double lap0 = t0 == 0.0 ? 0.0 : 1.0 / t0;
      out.lap_tau.at(i, j) = t1 * lap0 + 2.0 * (gx * t1x + gy * t1y) + t0 * t1lap;
    }
  }

  // the analytic tau0 derivatives are singular at the source: replace the
  // assembled values there by the average over the in-grid 4-neighborhood
  const auto neighbor_average = [&](const RealField& fld) {
    double sum = 0.0;
    int cnt = 0;
    const int off[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (const auto& o : off) {
      const int ni = source.i + o[0], nj = source.j + o[1];
      if (ni < 0 || ni >= n || nj < 0 || nj >= n) continue;
      sum += fld.at(ni, nj);
      ++cnt;
    }
    return sum / cnt;
  };
  out.tau_x.at(source.i, source.j) = neighbor_average(out.tau_x);
  out.tau_y.at(source.i, source.j) = neighbor_average(out.tau_y);
  out.lap_tau.at(source.i, source.j) = neighbor_average(out.lap_tau);

  return out;
}

PhaseField restrict_phase(const PhaseField& p, const Grid2D& target) {
  if (target.side != p.grid.side)
    throw std::invalid_argument("restrict_phase: target grid has a different extent");
  int nc = p.grid.n;
  int stride = 1;
  while (nc != target.n) {
    if (nc < target.n || nc % 2 == 0 || (nc - 1) / 2 < 1)
      throw std::invalid_argument("restrict_phase: target grid is not a nested coarsening");
    nc = (nc - 1) / 2;
    stride *= 2;
  }
  const int offset = stride - 1;  // coarse node I sits on fine node stride*I + offset

  PhaseField out;
  out.grid = target;
  out.tau = RealField(target);
  out.tau_x = RealField(target);
  out.tau_y = RealField(target);
  out.lap_tau = RealField(target);
  for (int J = 0; J < target.n; ++J) {
    for (int I = 0; I < target.n; ++I) {
      const int fi = offset + stride * I, fj = offset + stride * J;
      out.tau.at(I, J) = p.tau.at(fi, fj);
      out.tau_x.at(I, J) = p.tau_x.at(fi, fj);
      out.tau_y.at(I, J) = p.tau_y.at(fi, fj);
      out.lap_tau.at(I, J) = p.lap_tau.at(fi, fj);
    }
  }
  const auto snap = [&](int fine_idx) {
    const int I = (fine_idx - offset + stride / 2) / stride;
    return std::clamp(I, 0, target.n - 1);
  };
  out.source = NodeIndex{snap(p.source.i), snap(p.source.j)};
  return out;
}

}  // namespace waveadr

#include "waveadr/tuner.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "waveadr/helmholtz.hpp"

namespace waveadr {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

void validate_config(const TunerConfig& cfg) {
  if (cfg.cycles < 1) throw std::invalid_argument("tune_alphas: cycles must be >= 1");
  if (cfg.golden_passes < 0)
    throw std::invalid_argument("tune_alphas: golden_passes must be >= 0");
  if (cfg.sweeps < 1) throw std::invalid_argument("tune_alphas: sweeps must be >= 1");
  if (cfg.grid.empty()) throw std::invalid_argument("tune_alphas: candidate grid is empty");
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    if (!(cfg.grid[i] > 1.0))
      throw std::invalid_argument("tune_alphas: candidates must exceed 1");
    if (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1]))
      throw std::invalid_argument("tune_alphas: candidate grid must be strictly increasing");
  }
}

void validate_problem(const TunerProblem& prob) {
  if (prob.hier == nullptr || prob.phase == nullptr)
    throw std::invalid_argument("tuner: problem is missing hierarchy or phase data");
  if (static_cast<int>(prob.schedule.levels.size()) != prob.hier->depth())
    throw std::invalid_argument("tuner: schedule depth does not match the hierarchy");
  if (prob.rhs.grid != prob.hier->levels[0].grid)
    throw std::invalid_argument("tuner: right-hand side is not on the finest grid");
}

bool level_uses_chebyshev(const LevelSmoother& s) {
  return s.pre == SmootherKind::Chebyshev || s.post == SmootherKind::Chebyshev;
}

}  // namespace

TunerProblem make_tuner_problem(const Hierarchy& hier, const PhaseField& phase,
                                WaveADRConfig cycle) {
  TunerProblem prob;
  prob.hier = &hier;
  prob.phase = &phase;
  prob.schedule = build_smoother_schedule(hier, {}, cycle.level3_post_smoothing);
  prob.cycle = cycle;
  auto [ci, cj] = center_node(hier.levels[0].grid);
  prob.rhs = point_source(hier.levels[0].grid, ci, cj);
  return prob;
}

double cycle_loss(const TunerProblem& prob, const std::vector<double>& alphas, int k_cycles) {
  validate_problem(prob);
  if (k_cycles < 0) throw std::invalid_argument("cycle_loss: cycle count must be >= 0");
  if (alphas.size() != prob.schedule.levels.size())
    throw std::invalid_argument("cycle_loss: one alpha per level required");
  if (k_cycles == 0) return 1.0;

  const SmootherSchedule sched = with_alphas(prob.schedule, alphas);
  const WaveADRPreconditioner cycle(*prob.hier, *prob.phase, sched, prob.cycle);
  const HelmholtzLevelOp op(*prob.hier, 0);

  const ComplexField& g = prob.rhs;
  ComplexField u(g.grid);
  ComplexField r = g;
  for (int k = 0; k < k_cycles; ++k) {
    if (k > 0) {
      op.apply(u.v, r.v);
      for (std::size_t p = 0; p < r.v.size(); ++p) r.v[p] = g.v[p] - r.v[p];
    }
    const ComplexField e = cycle.apply(r);
    for (std::size_t p = 0; p < u.v.size(); ++p) u.v[p] += e.v[p];
  }
  op.apply(u.v, r.v);
  for (std::size_t p = 0; p < r.v.size(); ++p) r.v[p] = g.v[p] - r.v[p];

  const double num = norm2(r), den = norm2(g);
  const double loss = (num * num) / (den * den);
  if (!std::isfinite(loss)) return std::numeric_limits<double>::infinity();
  return loss;
}

TuneResult tune_alphas(const TunerProblem& prob, TunerConfig cfg) {
  validate_config(cfg);
  validate_problem(prob);

  const std::size_t depth = prob.schedule.levels.size();
  TuneResult out;
  out.alphas.resize(depth);
  for (std::size_t k = 0; k < depth; ++k) out.alphas[k] = prob.schedule.levels[k].cheby.alpha;

  const auto eval = [&](const std::vector<double>& a) {
    ++out.evaluations;
    return cycle_loss(prob, a, cfg.cycles);
  };

  // seed: best uniform candidate over the Chebyshev levels (ties -> lowest)
  double best_loss = std::numeric_limits<double>::infinity();
  {
    std::vector<double> trial = out.alphas;
    double best_alpha = cfg.grid.front();
    for (double c : cfg.grid) {
      for (std::size_t k = 0; k < depth; ++k)
        if (level_uses_chebyshev(prob.schedule.levels[k])) trial[k] = c;
      const double l = eval(trial);
      if (l < best_loss) {
        best_loss = l;
        best_alpha = c;
      }
    }
    if (!std::isfinite(best_loss))
      throw std::runtime_error("tune_alphas: every uniform candidate diverged");
    for (std::size_t k = 0; k < depth; ++k)
      if (level_uses_chebyshev(prob.schedule.levels[k])) out.alphas[k] = best_alpha;
  }

  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    for (std::size_t rk = 0; rk < depth; ++rk) {
      const std::size_t k = depth - 1 - rk;  // coarsest first
      if (!level_uses_chebyshev(prob.schedule.levels[k])) continue;

      // grid scan at this level, holding the others fixed
      double level_alpha = out.alphas[k];
      double level_loss = best_loss;
      bool any_finite = std::isfinite(level_loss);
      std::vector<double> trial = out.alphas;
      std::size_t pick = cfg.grid.size();  // grid index of the chosen candidate, if any
      for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        const double c = cfg.grid[i];
        if (c == level_alpha) {
          if (any_finite) pick = i;
          continue;  // incumbent loss already known
        }
        trial[k] = c;
        const double l = eval(trial);
        any_finite = any_finite || std::isfinite(l);
        if (l < level_loss || (l == level_loss && c < level_alpha)) {
          level_alpha = c;
          level_loss = l;
          pick = i;
        }
      }
      if (!any_finite)
        throw std::runtime_error("tune_alphas: all candidates diverged at level " +
                                 std::to_string(k + 1));

      // golden-section refinement on the bracket around the chosen candidate
      if (pick < cfg.grid.size() && cfg.golden_passes > 0) {
        double lo = pick > 0 ? cfg.grid[pick - 1] : cfg.grid[pick];
        double hi = pick + 1 < cfg.grid.size() ? cfg.grid[pick + 1] : cfg.grid[pick];
        for (int pass = 0; pass < cfg.golden_passes && hi > lo; ++pass) {
          const double x1 = hi - kInvPhi * (hi - lo);
          const double x2 = lo + kInvPhi * (hi - lo);
          trial[k] = x1;
          const double f1 = eval(trial);
          trial[k] = x2;
          const double f2 = eval(trial);
          if (f1 < level_loss || (f1 == level_loss && x1 < level_alpha)) {
            level_alpha = x1;
            level_loss = f1;
          }
          if (f2 < level_loss || (f2 == level_loss && x2 < level_alpha)) {
            level_alpha = x2;
            level_loss = f2;
          }
          if (f1 <= f2)
            hi = x2;
          else
            lo = x1;
        }
      }

      out.alphas[k] = level_alpha;
      best_loss = level_loss;
    }
  }

  out.loss = best_loss;
  return out;
}

std::string format_alphas(const std::vector<double>& alphas) {
  std::string text;
  char buf[40];
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", alphas[i]);
    if (i > 0) text += ',';
    text += buf;
  }
  return text;
}

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_alphas: not a number: '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size())
      throw std::invalid_argument("parse_alphas: trailing characters in '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("parse_alphas: empty list");
  return out;
}

}  // namespace waveadr

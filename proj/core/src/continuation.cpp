#include <algorithm>
#include <cmath>

#include "gv/errors.hpp"
#include "gv/gravitating.hpp"
#include "gv/vortex.hpp"

namespace gv {

namespace {

double field_distance(const GravSolution& a, const GravSolution& b) {
  return std::max((a.u.values() - b.u.values()).abs().maxCoeff(),
                  (a.f.values() - b.f.values()).abs().maxCoeff());
}

ScalarField extrapolate(const ScalarField& now, const ScalarField& before,
                        double ratio) {
  return ScalarField(now.grid(),
                     now.values() + ratio * (now.values() - before.values()));
}

}  // namespace

ContinuationPath continue_in_alpha(const GravProblem& problem,
                                   double alpha_target, double initial_step,
                                   const ContinuationOptions& options,
                                   const std::optional<GravSolution>& start) {
  if (!std::isfinite(alpha_target))
    throw ConfigurationError("continuation target must be finite");
  if (!(initial_step > 0.0))
    throw ConfigurationError("initial continuation step must be positive");

  ContinuationPath path;
  GravProblem stage = problem;
  stage.max_iterations = options.max_newton_iterations;

  if (start) {
    path.solutions.push_back(*start);
  } else {
    VortexProblem vp{problem.grid, problem.section, problem.tau,
                     std::min(problem.tolerance, 1e-10), 0};
    const VortexSolution v = solve_vortex(vp);
    stage.alpha = 0.0;
    path.solutions.push_back(
        solve_grav(stage, ScalarField::constant(problem.grid, 0.0), v.f));
  }
  path.steps.push_back({path.solutions.back().alpha, 0.0, true,
                        path.solutions.back().iterations,
                        std::max(path.solutions.back().residual_norms.first,
                                 path.solutions.back().residual_norms.second),
                        "start"});

  const double dir = alpha_target >= path.solutions.back().alpha ? 1.0 : -1.0;
  double h = initial_step;
  double slope_bound = 0.0;
  int accepted = 0;

  while (path.solutions.back().alpha != alpha_target) {
    const GravSolution& cur = path.solutions.back();
    const double remaining = std::abs(alpha_target - cur.alpha);
    if (options.max_step > 0.0) h = std::min(h, options.max_step);
    const bool last = h >= remaining;
    const double next = last ? alpha_target : cur.alpha + dir * h;
    const double dalpha = next - cur.alpha;

    ScalarField u0 = cur.u;
    ScalarField f0 = cur.f;
    if (path.solutions.size() >= 2) {
      const GravSolution& prev = path.solutions[path.solutions.size() - 2];
      const double ratio = dalpha / (cur.alpha - prev.alpha);
      u0 = extrapolate(cur.u, prev.u, ratio);
      f0 = extrapolate(cur.f, prev.f, ratio);
    }

    stage.alpha = next;
    ContinuationStep rec{next, std::abs(dalpha), false, 0, 0.0, ""};
    try {
      GravSolution sol = solve_grav(stage, u0, f0);
      rec.iterations = sol.iterations;
      rec.residual = std::max(sol.residual_norms.first, sol.residual_norms.second);
      const double slope = field_distance(sol, cur) / std::abs(dalpha);
      if (accepted >= 2 && slope > 10.0 * slope_bound) {
        rec.note = "path continuity bound exceeded";
      } else {
        slope_bound = std::max(slope_bound, slope);
        rec.accepted = true;
        ++accepted;
        path.steps.push_back(rec);
        path.solutions.push_back(std::move(sol));
        if (rec.iterations <= options.fast_iterations) h *= 1.5;
        continue;
      }
    } catch (const ConvergenceFailure& e) {
      rec.iterations = e.iterations();
      rec.residual = e.residual();
      rec.note = e.what();
    }
    path.steps.push_back(rec);
    h = std::min(h, remaining) * 0.5;
    if (h < options.min_step) {
      path.failure_alpha = next;
      path.failure_reason = "continuation step underflow: " + rec.note;
      return path;
    }
  }
  path.completed = true;
  return path;
}

}  // namespace gv

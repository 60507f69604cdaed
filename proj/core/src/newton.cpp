#include "gv/newton.hpp"

#include <algorithm>
#include <cmath>

#include "gv/errors.hpp"
#include "gv/krylov.hpp"

namespace gv {

NewtonResult newton_solve(NonlinearSystem& system, Eigen::VectorXd x0,
                          const NewtonOptions& options,
                          const std::string& what) {
  NewtonResult out;
  out.x = std::move(x0);
  Eigen::VectorXd r = system.residual(out.x);
  double rnorm = r.norm();
  out.history.push_back(rnorm);
  if (!std::isfinite(rnorm))
    throw ConvergenceFailure(what + ": non-finite initial residual", rnorm, 0,
                             out.history);

  const LinearOperator apply = [&](const Eigen::VectorXd& v) {
    return system.apply_jacobian(v);
  };
  const LinearOperator precond = [&](const Eigen::VectorXd& v) {
    return system.precondition(v);
  };

  while (rnorm > options.tolerance) {
    if (out.iterations >= options.max_iterations)
      throw ConvergenceFailure(what + ": iteration budget exhausted", rnorm,
                               out.iterations, out.history);
    system.linearize_at(out.x);
    const double forcing =
        std::clamp(rnorm, options.min_forcing, options.max_forcing);
    const KrylovResult lin =
        system.jacobian_is_spd()
            ? conjugate_gradient(apply, -r, precond, forcing,
                                 options.max_linear_iterations)
            : gmres(apply, -r, precond, forcing, options.gmres_restart,
                    options.max_linear_iterations);
    const Eigen::VectorXd& step = lin.x;

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    Eigen::VectorXd r_trial;
    double trial_norm = 0.0;
    while (t >= options.min_step) {
      trial = out.x + t * step;
      r_trial = system.residual(trial);
      trial_norm = r_trial.norm();
      if (std::isfinite(trial_norm) && trial_norm < (1.0 - 1e-4 * t) * rnorm) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++out.iterations;
    if (!accepted)
      throw ConvergenceFailure(what + ": line search failed", rnorm,
                               out.iterations, out.history);
    out.x = std::move(trial);
    r = std::move(r_trial);
    rnorm = trial_norm;
    out.history.push_back(rnorm);
  }
  out.residual = rnorm;
  return out;
}

}  // namespace gv

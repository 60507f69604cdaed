#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gv {

/// Discretized nonlinear system F(x) = 0 in coefficient space.
class NonlinearSystem {
 public:
  virtual ~NonlinearSystem() = default;

  virtual Eigen::Index size() const = 0;
  virtual Eigen::VectorXd residual(const Eigen::VectorXd& x) const = 0;
  /// Prepares apply_jacobian / precondition at x.
  virtual void linearize_at(const Eigen::VectorXd& x) = 0;
  virtual Eigen::VectorXd apply_jacobian(const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd precondition(const Eigen::VectorXd& r) const {
    return r;
  }
  /// True when the Jacobian is symmetric positive definite (enables CG).
  virtual bool jacobian_is_spd() const { return false; }
};

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
  double min_step = 1.0 / 1048576.0;
  double max_forcing = 1e-2;
  double min_forcing = 1e-13;
  int gmres_restart = 80;
  int max_linear_iterations = 2000;
};

struct NewtonResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

/// Damped inexact Newton with backtracking (factor 1/2). Throws
/// ConvergenceFailure when the line search stalls, the residual becomes
/// non-finite, or the iteration budget is exhausted.
NewtonResult newton_solve(NonlinearSystem& system, Eigen::VectorXd x0,
                          const NewtonOptions& options,
                          const std::string& what = "Newton iteration");

}  // namespace gv

#pragma once

#include <functional>

#include <Eigen/Core>

namespace gv {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct KrylovResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned conjugate gradients for symmetric positive definite A.
/// `preconditioner` applies an SPD approximation of A^{-1}.
KrylovResult conjugate_gradient(const LinearOperator& apply,
                                const Eigen::VectorXd& rhs,
                                const LinearOperator& preconditioner,
                                double rtol, int max_iterations);

/// Restarted GMRES with right preconditioning.
KrylovResult gmres(const LinearOperator& apply, const Eigen::VectorXd& rhs,
                   const LinearOperator& preconditioner, double rtol,
                   int restart, int max_iterations);

}  // namespace gv

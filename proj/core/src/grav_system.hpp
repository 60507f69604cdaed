#pragma once

#include <vector>

#include "gv/gravitating.hpp"
#include "gv/newton.hpp"

namespace gv::detail {

/// Coefficient-space gravitating vortex system, unknowns [u; f] and
/// equations [curvature row; vortex row], with the volume gauge in the
/// constant curvature row and optional degree-one freezing of u.
class GravSystem final : public NonlinearSystem {
 public:
  GravSystem(const GravProblem& problem, bool solver_rows);

  Eigen::Index size() const override { return 2 * n_; }
  Eigen::Index modes() const { return n_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override;
  void linearize_at(const Eigen::VectorXd& x) override;
  Eigen::VectorXd apply_jacobian(const Eigen::VectorXd& v) const override;
  Eigen::VectorXd precondition(const Eigen::VectorXd& r) const override;

  /// Unmodified (r1, r2) coefficients.
  void true_residual(const Eigen::VectorXd& x, Eigen::VectorXd& r1,
                     Eigen::VectorXd& r2) const;
  /// Unmodified derivative (d r1, d r2) at the last linearization point.
  void true_derivative(const Eigen::VectorXd& v, Eigen::VectorXd& d1,
                       Eigen::VectorXd& d2) const;
  /// Solves the vortex block (laplacian + exp(2u) psi) g = rhs.
  Eigen::VectorXd solve_vortex_block(const Eigen::VectorXd& rhs) const;

  const std::vector<Eigen::Index>& frozen_modes() const { return frozen_; }

  double conformal_volume(const Eigen::VectorXd& x) const;

 private:
  const SpectralBasis& basis_;
  const Eigen::ArrayXd& rho_;
  const Eigen::ArrayXd& weights_;
  Eigen::Index n_;
  double tau_;
  double alpha_;
  double c_;
  double flux_constant_;
  double volume_;
  bool solver_rows_;
  std::vector<Eigen::Index> frozen_;
  Eigen::ArrayXd e2u_;
  Eigen::ArrayXd psi_;
  double mean_e2u_ = 1.0;
  double mean_e2u_psi_ = 1.0;
};

}  // namespace gv::detail

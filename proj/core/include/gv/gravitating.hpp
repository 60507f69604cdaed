#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gv/geometry.hpp"
#include "gv/sections.hpp"

namespace gv {

/// Topological constant c = 2 pi (chi - 2 alpha tau N) / Vol.
double compute_c(double alpha, double tau, int degree, int chi, double volume);

struct GravProblem {
  SurfaceGrid grid;
  SectionField section;
  double tau = 1.0;
  double alpha = 0.0;
  double tolerance = 1e-10;
  int max_iterations = 100;
  /// Sphere only: freeze the degree-one harmonics of u (and drop the
  /// matching equations). Valid for divisors whose symmetry forces those
  /// components of the residual to vanish, e.g. (N/2){0} + (N/2){inf}.
  bool kernel_projection = false;

  double c() const;
};

struct GravSolution {
  ScalarField u;
  ScalarField f;
  /// L2 norms of the vortex-type and curvature-type residuals.
  std::pair<double, double> residual_norms;
  double conformal_volume = 0.0;
  double alpha = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

/// r1 = laplacian(f) + exp(2u)(exp(2f)|phi|^2 - tau)/2 + 2 pi N / Vol
/// r2 = laplacian(u + alpha exp(2f)|phi|^2 - 2 alpha tau f) + c (1 - exp(2u))
/// Nonlinear terms are evaluated on the dealiasing grid and projected.
struct GravResidual {
  ScalarField r1;
  ScalarField r2;
};
GravResidual residual(const ScalarField& u, const ScalarField& f,
                      const GravProblem& problem);

/// Frechet derivative of `residual` at (u, f).
class GravLinearization {
 public:
  GravLinearization(const ScalarField& u, const ScalarField& f,
                    const GravProblem& problem);
  /// Returns (d r1, d r2) in the direction (u_dot, f_dot).
  std::pair<ScalarField, ScalarField> apply(const ScalarField& u_dot,
                                            const ScalarField& f_dot) const;

 private:
  SurfaceGrid grid_;
  double alpha_;
  double tau_;
  double c_;
  Eigen::ArrayXd e2u_;
  Eigen::ArrayXd psi_;
};
GravLinearization linearize(const ScalarField& u, const ScalarField& f,
                            const GravProblem& problem);

/// Newton-Krylov solve from (u0, f0). The constant-mode curvature equation
/// is replaced by the volume condition int exp(2u) = Vol, which it implies
/// whenever c != 0 and which fixes the additive freedom of u when c = 0.
/// Reported residual norms are those of the unmodified equations.
GravSolution solve_grav(const GravProblem& problem, const ScalarField& u0,
                        const ScalarField& f0);

/// Smallest singular value of the solver's Jacobian restricted to
/// directions whose u-part is a degree-one harmonic (the Killing
/// potentials), with the f-part eliminated through the vortex block.
struct NearKernel {
  double sigma = 0.0;
  Eigen::VectorXd u_coefficients;
  Eigen::VectorXd f_coefficients;
};
NearKernel killing_probe(const ScalarField& u, const ScalarField& f,
                         const GravProblem& problem);

/// Dense Jacobian of the solver's system (coefficients ordered u then f),
/// for diagnostics at small bandlimit.
Eigen::MatrixXd jacobian_matrix(const ScalarField& u, const ScalarField& f,
                                const GravProblem& problem);

/// Smallest singular value of jacobian_matrix and its right singular vector.
NearKernel smallest_singular(const ScalarField& u, const ScalarField& f,
                             const GravProblem& problem);

/// S' + alpha (Delta' + tau)(exp(2f)|phi|^2 - tau) - c in the conformal
/// metric exp(2u) omega, with Delta' = exp(-2u) Delta.
ScalarField unreduced_residual(const GravSolution& solution,
                               const GravProblem& problem);

/// Ordered solutions of a continuation in alpha with step diagnostics.
struct ContinuationStep {
  double alpha = 0.0;
  double step = 0.0;
  bool accepted = false;
  int iterations = 0;
  double residual = 0.0;
  std::string note;
};

struct ContinuationPath {
  std::vector<GravSolution> solutions;
  std::vector<ContinuationStep> steps;
  bool completed = false;
  std::optional<double> failure_alpha;
  std::string failure_reason;
};

struct ContinuationOptions {
  double min_step = 1e-8;
  double max_step = 0.0;  // 0: unbounded
  int fast_iterations = 4;
  int max_newton_iterations = 40;
};

/// Adaptive continuation from the alpha of `start` (or from the alpha = 0
/// vortex solution) to `alpha_target`, halving the step on failure and
/// growing it by 1.5 after fast convergence.
ContinuationPath continue_in_alpha(const GravProblem& problem,
                                   double alpha_target, double initial_step,
                                   const ContinuationOptions& options = {},
                                   const std::optional<GravSolution>& start = {});

}  // namespace gv

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gv/geometry.hpp"
#include "gv/sections.hpp"

namespace gv {

/// Strict existence bound 4 pi N < tau Vol for the vortex equation.
bool bradlow_gate(int degree, double tau, double volume);

struct VortexProblem {
  SurfaceGrid grid;
  SectionField section;
  double tau = 1.0;
  double tolerance = 1e-10;
  /// 0 selects the default (100, or 500 near the Bradlow boundary).
  int max_iterations = 0;
};

struct VortexSolution {
  ScalarField f;
  double residual_norm = 0.0;
  int iterations = 0;
  double flux_defect = 0.0;
  std::vector<double> history;
  std::vector<std::string> warnings;
};

/// Galerkin residual of laplacian(f) + (exp(2f)|phi|^2 - tau)/2 + 2 pi N/Vol
/// in spectral coefficients; its Euclidean norm is the L2 residual.
Eigen::VectorXd vortex_residual(const Eigen::VectorXd& f_coeffs,
                                const VortexProblem& problem);

/// Solves the vortex equation for h' = exp(2f) h by damped Newton with
/// conjugate-gradient inner solves (the Jacobian laplacian + exp(2f)|phi|^2
/// is symmetric positive definite). Starts from the constant matching the
/// integrated equation unless `initial` is given.
VortexSolution solve_vortex(const VortexProblem& problem,
                            const std::optional<ScalarField>& initial = {});

/// |int exp(2f)|phi|^2 - (tau Vol - 4 pi N)|, on the dealiasing grid.
double flux_identity_check(const VortexSolution& solution,
                           const VortexProblem& problem);

}  // namespace gv

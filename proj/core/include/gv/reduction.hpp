#pragma once

#include <array>
#include <string>

#include "gv/einstein_bogomolnyi.hpp"
#include "gv/geometry.hpp"
#include "gv/gravitating.hpp"
#include "gv/sections.hpp"

namespace gv {

/// lambda = pi N / Vol + tau / 4 (Vol the area of the metric in use), the
/// only value for which the Poisson
/// problem of the second hermitian equation is solvable.
double compute_lambda(int degree, double tau, double volume);

/// Conformal potentials and parameters of a gravitating vortex, from either
/// solver.
struct ReductionInput {
  SurfaceGrid grid;
  SectionField section;
  double tau = 1.0;
  double alpha = 0.0;
  ScalarField u;
  ScalarField f;

  static ReductionInput from(const GravSolution& s, const GravProblem& p);
  static ReductionInput from(const EBSolution& s, const EBProblem& p);
};

/// Scalar avatars of the SU(2)-invariant Kaehler-Yang-Mills system on
/// Sigma x P^1, evaluated in the metric omega' = exp(2u) omega with
/// h' = exp(2f) h_0, h_2 = exp(f2) and h_1 = h' h_2. Residual slots:
///   0  i Lambda' F_{h1} + |phi|'^2 / 4 - lambda
///   1  i Lambda' F_{h2} - |phi|'^2 / 4 + tau / 2 - lambda
///   2  Lambda D' beta        (zero by SU(2)-equivariance, not computed)
///   3  Lambda D'' beta^*     (zero by SU(2)-equivariance, not computed)
///   4  S' + alpha (Delta' |phi|'^2 + 2 i tau Lambda' F_{h2}) - c
/// Norms are L2 with respect to omega'.
struct ReducedKYMData {
  double lambda = 0.0;
  ScalarField f2;
  std::array<double, 5> residuals{};
  /// int exp(2u)(2 lambda + |phi|'^2 / 2 - tau) before the Poisson solve.
  double solvability_defect = 0.0;
  /// Slot 4 with 2 i Lambda' F_{h2} replaced through the vortex equation
  /// form tau (|phi|'^2 - tau); equals the curvature equation of the
  /// gravitating vortex system.
  double curvature_equation_residual = 0.0;
  double conformal_volume = 0.0;

  double max_residual() const;
  bool pass(double threshold = 1e-5) const { return max_residual() < threshold; }
};

std::string residual_name(int slot);

/// int exp(2u)(2 lambda + |phi|'^2 / 2 - tau) for a trial lambda.
double solvability_defect(const ReductionInput& in, double lambda);

/// Throws InconsistentInput when the Poisson problem for f2 is not
/// solvable to `solvability_tolerance` (relative), which signals an
/// unconverged input.
ReducedKYMData assemble_and_check(const ReductionInput& in,
                                  double solvability_tolerance = 1e-8);

/// L2 (omega') mismatch between -Delta'|phi|'^2 - tau Delta' f2 and the
/// same quantity rebuilt from the Weitzenboeck formula
/// Delta'|phi|^2 = 2 |phi|^2 i Lambda' F_{h'} - |grad' |phi|^2|^2 / |phi|^2
/// together with the second hermitian equation.
double identity_probe(const ReductionInput& in, const ReducedKYMData& data);

}  // namespace gv

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gv/divisor.hpp"
#include "gv/geometry.hpp"
#include "gv/sections.hpp"

namespace gv {

/// c = 0 on the sphere: |alpha tau N - 1| < 1e-12.
bool eb_parameter_check(double alpha, double tau, int degree);

enum class YangCase { Symmetric, Stable, Neither };
std::string to_string(YangCase c);

/// Symmetric: D = (N/2) p1 + (N/2) p2; Stable: every n_j < N/2.
YangCase yang_hypothesis_check(const Divisor& divisor);

enum class CPrimePolicy {
  Volume,  // adjust c' so that int exp(2u) equals the target volume
  Fixed,   // keep c' as given
};

/// Single-equation form of the gravitating vortex equations with c = 0 on
/// the sphere: alpha = 1/(tau N), u = 2 alpha tau f - alpha exp(2f)|phi|^2 + c'
/// and laplacian(f) + exp(2u)(exp(2f)|phi|^2 - tau)/2 = -2 pi N / Vol.
struct EBProblem {
  SurfaceGrid grid;
  SectionField section;
  double tau = 1.0;
  CPrimePolicy policy = CPrimePolicy::Volume;
  double c_prime = 0.0;  // initial value (Volume) or the fixed value
  double target_volume = 6.283185307179586;
  double tolerance = 1e-10;
  int max_iterations = 100;
  /// Freeze the degree-one harmonics of f, which removes the dilation
  /// kernel of (N/2){0} + (N/2){inf}. Unset: enabled exactly for that
  /// divisor.
  std::optional<bool> kernel_projection;

  double alpha() const;
};

struct EBSolution {
  ScalarField f;
  ScalarField u;
  double c_prime = 0.0;
  double residual_norm = 0.0;
  double conformal_volume = 0.0;
  double integrated_identity_defect = 0.0;
  double max_e2u = 0.0;
  double min_e2u = 0.0;
  int iterations = 0;
  std::vector<double> history;
  YangCase yang = YangCase::Neither;
  bool experimental = false;
  bool kernel_projection = false;
};

/// u determined by f and c'.
ScalarField eb_conformal_potential(const ScalarField& f, double c_prime,
                                   const EBProblem& problem);

/// Projected residual of the single equation.
ScalarField eb_residual(const ScalarField& f, double c_prime,
                        const EBProblem& problem);

/// Newton-Krylov (GMRES) solve of the single equation, bordered with c'
/// when the volume policy is active. Runs for divisors outside Yang's
/// hypotheses are attempted and marked experimental.
EBSolution solve_eb(const EBProblem& problem,
                    const std::optional<ScalarField>& initial = {});

}  // namespace gv

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "gv/errors.hpp"
#include "gv/gravitating.hpp"
#include "gv/reduction.hpp"
#include "gv/sections.hpp"
#include "gv/vortex.hpp"

using namespace gv;
using oracle::pi;

namespace {

struct Solved {
  GravProblem problem;
  GravSolution solution;
};

Solved torus_solution(double alpha) {
  const SurfaceGrid g = SurfaceGrid::torus(64, {0, 1}, 1.0);
  const SectionField s = build_section(Divisor({{{0.3, 0.4}, 1, false}}), g);
  GravProblem p{g, s, 12 * pi, alpha, 1e-11, 100, false};
  const VortexSolution v = solve_vortex({g, s, p.tau, 1e-11, 0});
  return {p, solve_grav(p, ScalarField::constant(g, 0.0), v.f)};
}

double conformal_l2(const Eigen::ArrayXd& values, const ScalarField& u) {
  const SurfaceGrid& g = u.grid();
  return std::sqrt(integrate(ScalarField(g, values.square() * (2 * u.values()).exp()), g));
}

}  // namespace

TEST_CASE("lambda value") {
  CHECK(compute_lambda(3, 2.0, 5.0) == doctest::Approx(3 * pi / 5.0 + 0.5));
  const Solved s = torus_solution(0.0);
  const ReductionInput in = ReductionInput::from(s.solution, s.problem);
  // only this lambda makes the second hermitian equation solvable
  const double lam = compute_lambda(1, s.problem.tau, s.solution.conformal_volume);
  CHECK(std::abs(solvability_defect(in, lam)) < 1e-9);
  CHECK(std::abs(solvability_defect(in, lam + 0.01)) > 1e-3);
}

TEST_CASE("weak-coupling endpoint reduces exactly") {
  const Solved s = torus_solution(0.0);
  const ReducedKYMData d = assemble_and_check(ReductionInput::from(s.solution, s.problem));
  CHECK(d.lambda == doctest::Approx(pi / 1.0 + s.problem.tau / 4).epsilon(1e-12));
  for (int k = 0; k < 5; ++k) CHECK(d.residuals[k] < 1e-9);
  CHECK(d.pass());
  CHECK(d.curvature_equation_residual < 1e-9);
  CHECK(identity_probe(ReductionInput::from(s.solution, s.problem), d) < 1e-6);
}

TEST_CASE("coupled solution: hermitian equations hold, scalar slot carries a fixed defect") {
  const Solved s = torus_solution(0.01);
  const ReductionInput in = ReductionInput::from(s.solution, s.problem);
  const ReducedKYMData d = assemble_and_check(in);
  CHECK(d.residuals[0] < 1e-9);
  CHECK(d.residuals[1] < 1e-9);
  CHECK(d.curvature_equation_residual < 1e-9);
  // the literal scalar equation differs from the curvature equation by
  // alpha tau (2 lambda - |phi|'^2 / 2)
  const Eigen::ArrayXd psi = (2 * s.solution.f.values()).exp() * s.problem.section.density().values();
  const double expected =
      conformal_l2(s.problem.alpha * s.problem.tau * (2 * d.lambda - 0.5 * psi), s.solution.u);
  CHECK(d.residuals[4] == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("trivial branch gives constant data") {
  const SurfaceGrid g = SurfaceGrid::torus(32, {0, 1}, 2.0);
  const SectionField flat = SectionField::constant(g, 0.5, 0);
  const double tau = 3.0;
  GravProblem p{g, flat, tau, 0.02, 1e-12, 100, false};
  const GravSolution s = solve_grav(p, ScalarField::constant(g, 0.0), ScalarField::constant(g, 0.0));
  // tau = |phi|^2_{h'} with a flat metric
  CHECK((s.f.values() - 0.5 * std::log(tau / 0.5)).abs().maxCoeff() < 1e-12);
  CHECK(s.u.sup_norm() < 1e-12);
  const ReducedKYMData d = assemble_and_check(ReductionInput::from(s, p));
  for (int k = 0; k < 5; ++k) CHECK(d.residuals[k] < 1e-12);
  CHECK((d.f2.values() - d.f2[0]).abs().maxCoeff() < 1e-12);
  CHECK(d.lambda == doctest::Approx(tau / 4).epsilon(1e-12));
}

TEST_CASE("unconverged input is rejected") {
  const Solved s = torus_solution(0.0);
  ReductionInput in = ReductionInput::from(s.solution, s.problem);
  in.f = ScalarField(in.grid, in.f.values() + 0.05 * in.f.values().sin());
  CHECK_THROWS_AS(assemble_and_check(in), InconsistentInput);
  CHECK(residual_name(4) == "scalar_curvature");
}

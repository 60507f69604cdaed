#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "gv/errors.hpp"
#include "gv/sections.hpp"
#include "gv/vortex.hpp"

using namespace gv;
using oracle::pi;

namespace {

VortexProblem problem(const SurfaceGrid& g, const Divisor& d, double factor) {
  const double tau = factor * 4 * pi * d.degree() / g.volume();
  return VortexProblem{g, build_section(d, g), tau, 1e-11, 0};
}

// Residual assembled from public primitives, sampled at the base nodes.
double pointwise_residual(const VortexSolution& s, const VortexProblem& p) {
  const SurfaceGrid& g = p.grid;
  const Eigen::ArrayXd lf = laplacian(s.f, g).values();
  const Eigen::ArrayXd psi = (2 * s.f.values()).exp() * p.section.density().values();
  const Eigen::ArrayXd r =
      lf + 0.5 * (psi - p.tau) + 2 * pi * p.section.degree() / g.volume();
  return r.abs().maxCoeff();
}

}  // namespace

TEST_CASE("constant density has the closed-form solution") {
  for (const SurfaceGrid& g : {SurfaceGrid::sphere(16, 2 * pi), SurfaceGrid::torus(32, {0, 1}, 3.0)}) {
    const double rho = 0.37, tau = 2.5;
    const VortexProblem p{g, SectionField::constant(g, rho), tau, 1e-11, 0};
    const VortexSolution s = solve_vortex(p, ScalarField::constant(g, 1.0));
    CHECK((s.f.values() - 0.5 * std::log(tau / rho)).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("solutions satisfy the equation and the flux identity") {
  std::mt19937_64 rng(8);
  const std::complex<double> tau_m(0.2, 1.3);
  for (int genus : {0, 1})
    for (int n : {1, 2, 3}) {
      const SurfaceGrid g = genus == 0 ? SurfaceGrid::sphere(32, 4.0) : SurfaceGrid::torus(48, tau_m, 2.0);
      const Divisor d = oracle::random_divisor(rng, n, genus, tau_m);
      const VortexProblem p = problem(g, d, 2.0);
      const VortexSolution s = solve_vortex(p);
      CHECK(s.residual_norm < 1e-10);
      CHECK(vortex_residual(s.f.coefficients(), p).norm() < 1e-10);
      CHECK(pointwise_residual(s, p) < 1e-6);
      // flux from the base-node quadrature, independent of the solver's
      const double flux = integrate(ScalarField(g, (2 * s.f.values()).exp() * p.section.density().values()), g);
      CHECK(flux == doctest::Approx(p.tau * g.volume() - 4 * pi * n).epsilon(1e-7));
      CHECK(flux_identity_check(s, p) < 1e-7);
    }
}

TEST_CASE("flux is affine in tau") {
  const SurfaceGrid g = SurfaceGrid::torus(32, {0, 1}, 1.0);
  const Divisor d({{{0.25, 0.5}, 1, false}, {{0.7, 0.2}, 1, false}});
  const SectionField sec = build_section(d, g);
  for (double tau : {30.0, 40.0, 80.0}) {
    const VortexProblem p{g, sec, tau, 1e-11, 0};
    const VortexSolution s = solve_vortex(p);
    const double flux = integrate(ScalarField(g, (2 * s.f.values()).exp() * sec.density().values()), g);
    CHECK(flux == doctest::Approx(tau - 8 * pi).epsilon(1e-9));
  }
}

TEST_CASE("scaling the section shifts the solution") {
  // |phi|^2 -> s |phi|^2 is absorbed by f -> f - log(s) / 2
  const SurfaceGrid g = SurfaceGrid::sphere(24, 2 * pi);
  const Divisor d({{{0.3, 0.2}, 2, false}, {{}, 1, true}});
  const SectionField sec = build_section(d, g);
  const double tau = 12.0;
  const VortexSolution a = solve_vortex({g, sec, tau, 1e-11, 0});
  const VortexSolution b = solve_vortex({g, sec.scaled(5.0), tau, 1e-11, 0});
  CHECK((a.f.values() - 0.5 * std::log(5.0) - b.f.values()).abs().maxCoeff() < 1e-9);
}

TEST_CASE("solution is independent of the initial guess") {
  std::mt19937_64 rng(13);
  const SurfaceGrid g = SurfaceGrid::sphere(24, 2 * pi);
  const VortexProblem p = problem(g, oracle::random_divisor(rng, 3, 0), 1.2);
  const VortexSolution a = solve_vortex(p);
  const VortexSolution b = solve_vortex(p, oracle::random_field(g, rng, 0.5));
  CHECK((a.f.values() - b.f.values()).abs().maxCoeff() < 1e-8);
}

TEST_CASE("bradlow gate is strict") {
  CHECK(bradlow_gate(1, 1.0001 * 4 * pi, 1.0));
  CHECK_FALSE(bradlow_gate(1, 4 * pi, 1.0));
  CHECK_FALSE(bradlow_gate(2, 1.0, 1.0));
  const SurfaceGrid g = SurfaceGrid::torus(16, {0, 1}, 2.0);
  const SectionField sec = build_section(Divisor({{{0.5, 0.5}, 1, false}}), g);
  try {
    solve_vortex({g, sec, 2 * pi, 1e-10, 0});
    FAIL("boundary case accepted");
  } catch (const NoSolutionExists& e) {
    CHECK(e.lhs() == doctest::Approx(4 * pi));
    CHECK(e.rhs() == doctest::Approx(4 * pi));
  }
}

TEST_CASE("invalid vortex problems are rejected") {
  const SurfaceGrid g = SurfaceGrid::torus(16, {0, 1}, 1.0);
  const SectionField sec = build_section(Divisor({{{0.5, 0.5}, 1, false}}), g);
  CHECK_THROWS_AS(solve_vortex({g, sec, 20.0, 1e-3, 0}), ConfigurationError);
  CHECK_THROWS_AS(solve_vortex({g, sec, -1.0, 1e-10, 0}), ConfigurationError);
  CHECK_THROWS_AS(solve_vortex({g, SectionField::constant(g, 0.0), 20.0, 1e-10, 0}), ConfigurationError);
  const SurfaceGrid other = SurfaceGrid::torus(16, {0, 1}, 1.0);
  CHECK_THROWS_AS(solve_vortex({other, sec, 20.0, 1e-10, 0}), GridMismatch);
}

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "gv/errors.hpp"
#include "gv/gravitating.hpp"
#include "gv/sections.hpp"
#include "gv/vortex.hpp"

using namespace gv;
using oracle::pi;

namespace {

ScalarField axpy(const ScalarField& x, double h, const ScalarField& v) {
  return ScalarField(x.grid(), x.values() + h * v.values());
}

double fd_mismatch(const ScalarField& u, const ScalarField& f, const ScalarField& du,
                   const ScalarField& df, const GravProblem& p) {
  const double h = 1e-5;
  const GravResidual plus = residual(axpy(u, h, du), axpy(f, h, df), p);
  const GravResidual minus = residual(axpy(u, -h, du), axpy(f, -h, df), p);
  const auto [d1, d2] = linearize(u, f, p).apply(du, df);
  const Eigen::ArrayXd e1 = (plus.r1.values() - minus.r1.values()) / (2 * h) - d1.values();
  const Eigen::ArrayXd e2 = (plus.r2.values() - minus.r2.values()) / (2 * h) - d2.values();
  const double scale = std::hypot(l2_norm(d1), l2_norm(d2));
  return std::hypot(l2_norm(ScalarField(u.grid(), e1)), l2_norm(ScalarField(u.grid(), e2))) / scale;
}

GravProblem torus_problem(double alpha) {
  const SurfaceGrid g = SurfaceGrid::torus(32, {0, 1}, 1.0);
  const SectionField s = build_section(Divisor({{{0.3, 0.4}, 1, false}}), g);
  return GravProblem{g, s, 12 * pi, alpha, 1e-10, 100, false};
}

GravProblem balanced_sphere_problem(bool projection) {
  const SurfaceGrid g = SurfaceGrid::sphere(16, 2 * pi);
  const SectionField s = build_section(Divisor({{{0, 0}, 1, false}, {{}, 1, true}}), g);
  return GravProblem{g, s, 6.0, 0.0, 1e-10, 100, projection};
}

}  // namespace

TEST_CASE("coupling constant is fixed topologically") {
  CHECK(compute_c(0.1, 3.0, 2, 2, 5.0) == doctest::Approx(2 * pi * (2 - 2 * 0.1 * 3 * 2) / 5.0));
  CHECK(compute_c(0.0, 3.0, 2, 0, 5.0) == 0.0);
  const GravProblem p = torus_problem(0.02);
  CHECK(p.c() == doctest::Approx(-2 * pi * 2 * 0.02 * 12 * pi));
}

TEST_CASE("linearization matches central differences") {
  std::mt19937_64 rng(3);
  for (int genus : {0, 1})
    for (double alpha : {0.0, 0.013, -0.02}) {
      const SurfaceGrid g = genus == 0 ? SurfaceGrid::sphere(16, 2 * pi) : SurfaceGrid::torus(32, {0.1, 1.2}, 1.5);
      const Divisor d = oracle::random_divisor(rng, 2, genus, {0.1, 1.2});
      const GravProblem p{g, build_section(d, g), 3.0 * 8 * pi / g.volume(), alpha, 1e-10, 100, false};
      for (int base = 0; base < 2; ++base) {
        const ScalarField u = oracle::random_field(g, rng, 0.3);
        const ScalarField f = oracle::random_field(g, rng, 0.3);
        for (int dir = 0; dir < 3; ++dir)
          CHECK(fd_mismatch(u, f, oracle::random_field(g, rng), oracle::random_field(g, rng), p) < 1e-6);
      }
    }
}

TEST_CASE("curvature row at the weak-coupling point") {
  // at alpha = 0, u = 0 the u-row is laplacian - 4 pi chi / Vol
  std::mt19937_64 rng(6);
  for (const SurfaceGrid& g : {SurfaceGrid::sphere(16, 3.0), SurfaceGrid::torus(32, {0, 1}, 1.0)}) {
    const SectionField s = build_section(oracle::random_divisor(rng, 1, g.genus()), g);
    const GravProblem p{g, s, 40.0, 0.0, 1e-10, 100, false};
    const ScalarField f0 = solve_vortex({g, s, 40.0, 1e-11, 0}).f;
    const GravLinearization lin = linearize(ScalarField::constant(g, 0.0), f0, p);
    for (int k = 0; k < 5; ++k) {
      const ScalarField du = oracle::random_field(g, rng);
      const ScalarField df = oracle::random_field(g, rng);
      const ScalarField r2 = lin.apply(du, df).second;
      const Eigen::ArrayXd expected =
          laplacian(du, g).values() - 4 * pi * g.euler_characteristic() / g.volume() * du.values();
      CHECK(l2_norm(ScalarField(g, r2.values() - expected)) < 1e-12 * l2_norm(ScalarField(g, expected)));
    }
  }
}

TEST_CASE("torus solution at zero coupling is the vortex with flat metric") {
  const GravProblem p = torus_problem(0.0);
  const VortexSolution v = solve_vortex({p.grid, p.section, p.tau, 1e-11, 0});
  const GravSolution s = solve_grav(p, ScalarField::constant(p.grid, 0.1), v.f);
  CHECK(s.u.sup_norm() < 1e-10);
  CHECK((s.f.values() - v.f.values()).abs().maxCoeff() < 1e-9);
}

TEST_CASE("small coupling solve on the torus") {
  const GravProblem p = torus_problem(0.005);
  const VortexSolution v = solve_vortex({p.grid, p.section, p.tau, 1e-11, 0});
  const GravSolution s = solve_grav(p, ScalarField::constant(p.grid, 0.0), v.f);
  CHECK(s.residual_norms.first < 1e-10);
  CHECK(s.residual_norms.second < 1e-10);
  CHECK(s.conformal_volume == doctest::Approx(p.grid.volume()).epsilon(1e-10));
  const GravResidual r = residual(s.u, s.f, p);
  CHECK(l2_norm(r.r1) < 1e-10);
  CHECK(l2_norm(r.r2) < 1e-10);
  // the equation before the conformal reduction
  CHECK(l2_norm(unreduced_residual(s, p)) < 1e-9);
  CHECK(s.u.sup_norm() > 1e-4);
}

TEST_CASE("continuation in both directions") {
  for (double target : {0.006, -0.006}) {
    const ContinuationPath path = continue_in_alpha(torus_problem(0.0), target, 0.002);
    REQUIRE(path.completed);
    CHECK(path.solutions.back().alpha == doctest::Approx(target));
    CHECK(path.solutions.front().alpha == 0.0);
    for (const GravSolution& s : path.solutions)
      CHECK(std::hypot(s.residual_norms.first, s.residual_norms.second) < 1e-9);
  }
}

TEST_CASE("balanced sphere configuration has a Killing kernel") {
  const GravProblem p = balanced_sphere_problem(false);
  const VortexSolution v = solve_vortex({p.grid, p.section, p.tau, 1e-11, 0});
  const ScalarField u0 = ScalarField::constant(p.grid, 0.0);
  const NearKernel k = smallest_singular(u0, v.f, p);
  CHECK(k.sigma < 1e-6);
  // the u-part lives on the degree-one harmonics
  const SphereBasis& b = *p.grid.sphere_basis();
  double on = 0.0;
  for (Eigen::Index m : b.degree_one_modes()) on += k.u_coefficients[m] * k.u_coefficients[m];
  CHECK(std::sqrt(on) > 0.99 * k.u_coefficients.norm());
  CHECK(killing_probe(u0, v.f, p).sigma < 1e-6);
  CHECK_THROWS_AS(solve_grav(p, u0, v.f), SingularJacobian);

  GravProblem q = p;
  q.kernel_projection = true;
  const GravSolution s = solve_grav(q, u0, v.f);
  CHECK(std::hypot(s.residual_norms.first, s.residual_norms.second) < 1e-10);
}

TEST_CASE("gravitating problems are validated") {
  GravProblem p = torus_problem(0.0);
  const ScalarField zero = ScalarField::constant(p.grid, 0.0);
  GravProblem bad = p;
  bad.kernel_projection = true;
  CHECK_THROWS_AS(solve_grav(bad, zero, zero), ConfigurationError);
  bad = p;
  bad.section = SectionField::constant(p.grid, 0.0, 1);
  CHECK_THROWS_AS(solve_grav(bad, zero, zero), ConfigurationError);
  CHECK_THROWS_AS(continue_in_alpha(p, 0.01, 0.0), ConfigurationError);
  const SurfaceGrid other = SurfaceGrid::torus(32, {0, 1}, 1.0);
  CHECK_THROWS_AS(solve_grav(p, ScalarField::constant(other, 0.0), zero), GridMismatch);
}

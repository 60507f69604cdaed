#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "gv/einstein_bogomolnyi.hpp"
#include "gv/errors.hpp"
#include "gv/gravitating.hpp"
#include "gv/radial_ode.hpp"
#include "gv/sections.hpp"

using namespace gv;
using oracle::pi;

namespace {

EBProblem symmetric_problem(int n, int bandlimit) {
  const SurfaceGrid g = SurfaceGrid::sphere(bandlimit, 2 * pi);
  const Divisor d({{{0, 0}, n / 2, false}, {{}, n / 2, true}});
  EBProblem p{g, build_section(d, g), 1.5 * 4 * pi * n / g.volume()};
  p.tolerance = 1e-11;
  return p;
}

std::vector<double> latitudes(const SurfaceGrid& g) {
  const QuadratureGrid& q = g.nodes();
  std::vector<double> s(q.rows);
  for (int i = 0; i < q.rows; ++i) s[i] = std::log(std::tan(0.5 * q.first[i * q.cols]));
  return s;
}

}  // namespace

TEST_CASE("parameter relation") {
  CHECK(eb_parameter_check(0.25, 2.0, 2));
  CHECK_FALSE(eb_parameter_check(0.25, 2.0, 3));
  const EBProblem p = symmetric_problem(2, 16);
  CHECK(p.alpha() * p.tau * 2 == doctest::Approx(1.0));
  CHECK(compute_c(p.alpha(), p.tau, 2, 2, p.grid.volume()) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("symmetric solution agrees with the radial ODE") {
  for (int n : {2, 4}) {
    const EBProblem p = symmetric_problem(n, 40);
    const EBSolution s = solve_eb(p);
    CHECK(s.yang == YangCase::Symmetric);
    CHECK_FALSE(s.experimental);
    CHECK(s.residual_norm < 1e-10);
    CHECK(std::abs(s.conformal_volume - 2 * pi) < 1e-8);
    CHECK(s.integrated_identity_defect < 1e-6);

    const auto s_rows = latitudes(p.grid);
    const RadialProfile prof = radial_ode_oracle(n, p.tau, p.alpha(), p.grid.volume(), s_rows);
    const QuadratureGrid& q = p.grid.nodes();
    double err = 0.0;
    for (int i = 0; i < q.rows; ++i)
      for (int k = 0; k < q.cols; ++k) err = std::max(err, std::abs(s.f[i * q.cols + k] - prof.f[i]));
    CHECK(err < 1e-6);
    CHECK(prof.c_prime == doctest::Approx(s.c_prime).epsilon(1e-8));

    // no dependence on longitude
    const Eigen::VectorXd c = s.f.coefficients();
    const SphereBasis& b = *p.grid.sphere_basis();
    for (Eigen::Index m = 0; m < c.size(); ++m)
      if (b.order(m) != 0) CHECK(std::abs(c[m]) < 1e-8);
  }
}

TEST_CASE("solution solves the coupled system with c = 0") {
  const EBProblem p = symmetric_problem(2, 40);
  const EBSolution s = solve_eb(p);
  const GravProblem g{p.grid, p.section, p.tau, p.alpha(), 1e-10, 100, false};
  const GravResidual r = residual(s.u, s.f, g);
  CHECK(l2_norm(r.r1) < 1e-9);
  CHECK(l2_norm(r.r2) < 1e-9);
  const Eigen::ArrayXd e2u = (2 * s.u.values()).exp();
  const Eigen::ArrayXd psi = (2 * s.f.values()).exp() * p.section.density().values();
  const double identity = integrate(ScalarField(p.grid, e2u * (psi - p.tau)), p.grid);
  CHECK(identity == doctest::Approx(-4 * pi * 2).epsilon(1e-8));
  CHECK(s.max_e2u >= e2u.maxCoeff() - 1e-12);  // extremes are taken on the finer grid
}

TEST_CASE("stable divisor") {
  const SurfaceGrid g = SurfaceGrid::sphere(32, 2 * pi);
  const Divisor d({{{0.3, 0.1}, 1, false}, {{-1.2, 0.5}, 1, false}, {{0.4, -2.0}, 1, false}, {{}, 1, true}});
  EBProblem p{g, build_section(d, g), 12.0};
  const EBSolution s = solve_eb(p);
  CHECK(s.yang == YangCase::Stable);
  CHECK_FALSE(s.kernel_projection);
  CHECK(s.residual_norm < 1e-8);
  CHECK(std::abs(s.conformal_volume - 2 * pi) < 1e-8);
}

TEST_CASE("fixed c' reproduces the volume-normalized solution") {
  const EBProblem p = symmetric_problem(2, 24);
  const EBSolution a = solve_eb(p);
  EBProblem fixed = p;
  fixed.policy = CPrimePolicy::Fixed;
  fixed.c_prime = a.c_prime;
  const EBSolution b = solve_eb(fixed);
  CHECK((a.f.values() - b.f.values()).abs().maxCoeff() < 1e-8);
  CHECK(b.conformal_volume == doctest::Approx(2 * pi).epsilon(1e-8));
  fixed.c_prime = a.c_prime + 0.1;
  const EBSolution c = solve_eb(fixed);
  CHECK(c.residual_norm < 1e-9);
  CHECK(std::abs(c.conformal_volume - 2 * pi) > 1e-3);
}

TEST_CASE("radial profile is even and flat at the horizon") {
  const RadialProfile p = radial_ode_oracle(2, 6.0, 1.0 / 12.0, 2 * pi, {-3.0, -1.0, 0.0, 1.0, 3.0});
  CHECK(p.f[0] == doctest::Approx(p.f[4]).epsilon(1e-12));
  CHECK(p.f[1] == doctest::Approx(p.f[3]).epsilon(1e-12));
  CHECK(p.f[2] == doctest::Approx(p.f_center).epsilon(1e-12));
  CHECK(std::abs(p.end_slope) < 1e-10);
  CHECK(p.volume == doctest::Approx(2 * pi).epsilon(1e-10));
  CHECK_THROWS_AS(radial_ode_oracle(3, 6.0, 1.0, 2 * pi, {0.0}), ConfigurationError);
}

TEST_CASE("Einstein-Bogomol'nyi inputs are validated") {
  const SurfaceGrid t = SurfaceGrid::torus(16, {0, 1}, 1.0);
  EBProblem torus{t, build_section(Divisor({{{0.5, 0.5}, 1, false}}), t), 20.0};
  CHECK_THROWS_AS(solve_eb(torus), ConfigurationError);
  EBProblem low = symmetric_problem(2, 16);
  low.tau = 4.0;  // tau Vol = 8 pi = 4 pi N
  CHECK_THROWS_AS(solve_eb(low), NoSolutionExists);
  const SurfaceGrid s = SurfaceGrid::sphere(16, 2 * pi);
  EBProblem flat{s, SectionField::constant(s, 1.0, 0), 3.0};
  CHECK_THROWS_AS(solve_eb(flat), ConfigurationError);
}

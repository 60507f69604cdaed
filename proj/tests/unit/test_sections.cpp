#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "gv/errors.hpp"
#include "gv/sections.hpp"
#include "gv/theta.hpp"

using namespace gv;
using oracle::cd;
using oracle::pi;

namespace {

// theta_1 from its Jacobi triple product, nome q = exp(i pi tau)
cd theta1_product(cd x, cd tau) {
  const cd q = std::exp(cd(0, pi) * tau);
  cd prod = 2.0 * std::exp(cd(0, pi / 4) * tau) * std::sin(x);
  for (int n = 1; n < 200; ++n) {
    const cd q2n = std::pow(q, 2 * n);
    prod *= (1.0 - q2n) * (1.0 - 2.0 * q2n * std::cos(2.0 * x) + q2n * q2n);
  }
  return prod;
}

double chordal_product(const Divisor& d, cd z) {
  double out = 1.0;
  for (const DivisorPoint& p : d.points()) {
    const double c = p.at_infinity ? 1.0 / (1.0 + std::norm(z))
                                   : std::norm(z - p.z) / ((1 + std::norm(p.z)) * (1 + std::norm(z)));
    out *= std::pow(c, p.multiplicity);
  }
  return out;
}

Divisor sample_sphere_divisor() {
  return Divisor({{{0.4, -0.2}, 2, false}, {{-1.5, 0.7}, 1, false}, {{}, 1, true}});
}

Divisor sample_torus_divisor(cd tau) {
  return Divisor({{0.2 + 0.3 * tau, 1, false}, {0.7 + 0.6 * tau, 2, false}});
}

}  // namespace

TEST_CASE("theta series matches the triple product") {
  for (cd tau : {cd(0, 1), cd(0.31, 1.4), cd(-0.5, 0.8)})
    for (cd x : {cd(0.3, 0.1), cd(-1.2, 0.4), cd(2.0, -0.3)}) {
      const cd a = jacobi_theta1(x, tau), b = theta1_product(x, tau);
      CHECK(std::abs(a - b) < 1e-13 * std::max(1.0, std::abs(b)));
      const double h = 1e-5;
      const cd fd = (jacobi_theta1(x + h, tau) - jacobi_theta1(x - h, tau)) / (2 * h);
      CHECK(std::abs(jacobi_theta1_prime(x, tau) - fd) < 1e-8 * std::max(1.0, std::abs(fd)));
    }
  // quasi-periodicity: theta(x + pi tau) = -exp(-i pi tau - 2 i x) theta(x)
  const cd tau(0.2, 1.1), x(0.4, 0.2);
  const cd lhs = jacobi_theta1(x + pi * tau, tau);
  const cd rhs = -std::exp(-cd(0, pi) * tau - 2.0 * cd(0, 1) * x) * jacobi_theta1(x, tau);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("sphere density is the chordal product, normalized to sup one") {
  const SurfaceGrid g = SurfaceGrid::sphere(32, 2 * pi);
  const Divisor d = sample_sphere_divisor();
  const SectionField s = build_section(d, g);
  CHECK(s.degree() == 4);
  const QuadratureGrid& q = g.nodes();
  double peak = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(s.density()[i] == doctest::Approx(s.normalization() * chordal_product(d, q.z[i])).epsilon(1e-12));
    peak = std::max(peak, s.density()[i]);
  }
  CHECK(s.samples(Level::Fine).maxCoeff() <= 1.0 + 1e-12);
  CHECK(peak > 0.95);
  CHECK(sphere_section_density(d, d.points()[0].z) < 1e-28);
}

TEST_CASE("hermitian-einstein densities have constant log-laplacian") {
  // Away from the zeros, Delta log |phi|^2 = 4 pi N / Vol since the
  // distributional part is -4 pi per zero and the integral vanishes.
  std::mt19937_64 rng(1);
  const Divisor ds = sample_sphere_divisor();
  for (double volume : {2 * pi, 3.0}) {
    const auto logrho = [&](cd z) { return std::log(sphere_section_density(ds, z)); };
    for (int k = 0; k < 10; ++k) {
      const cd z = oracle::random_sphere_point(rng);
      if (std::abs(z) > 5.0) continue;
      CHECK(oracle::fd_laplacian_sphere(logrho, z, volume, 1e-3) ==
            doctest::Approx(4 * pi * ds.degree() / volume).epsilon(1e-5));
    }
  }
  const cd tau(0.31, 1.4);
  const Divisor dt = sample_torus_divisor(tau);
  const auto logrho_t = [&](cd z) { return std::log(torus_section_density(dt, tau, z)); };
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const cd z = u(rng) + u(rng) * tau;
    CHECK(oracle::fd_laplacian_torus(logrho_t, z, tau, 2.0, 1e-3) ==
          doctest::Approx(4 * pi * dt.degree() / 2.0).epsilon(1e-5));
  }
}

TEST_CASE("torus density is doubly periodic and vanishes on the divisor") {
  const cd tau(0.31, 1.4);
  const Divisor d = sample_torus_divisor(tau);
  for (cd z : {cd(0.1, 0.2), cd(0.45, 0.9), cd(-0.3, 0.1)}) {
    const double r = torus_section_density(d, tau, z, false);
    CHECK(torus_section_density(d, tau, z + 1.0, false) == doctest::Approx(r).epsilon(1e-10));
    CHECK(torus_section_density(d, tau, z + tau, false) == doctest::Approx(r).epsilon(1e-10));
    CHECK(torus_section_density(d, tau, z) == doctest::Approx(r).epsilon(1e-10));
  }
  CHECK(torus_section_density(d, tau, d.points()[0].z) < 1e-20);
  CHECK(torus_section_density(d, tau, d.points()[1].z + 1.0 + tau) < 1e-20);
}

TEST_CASE("gradient energy matches finite differences") {
  const SurfaceGrid gs = SurfaceGrid::sphere(24, 5.0);
  const Divisor ds = sample_sphere_divisor();
  const SectionField ss = build_section(ds, gs);
  const auto rho_s = [&](cd z) { return ss.normalization() * sphere_section_density(ds, z); };
  const QuadratureGrid& qs = gs.nodes();
  for (std::size_t i = 3 * qs.cols; i < qs.size() - 3 * qs.cols; i += 53) {
    const double r = rho_s(qs.z[i]);
    if (r < 1e-3) continue;
    CHECK(ss.gradient_energy(Level::Base)[i] ==
          doctest::Approx(oracle::fd_gradient2_sphere(rho_s, qs.z[i], 5.0) / r).epsilon(1e-6));
  }

  const cd tau(0.31, 1.4);
  const SurfaceGrid gt = SurfaceGrid::torus(32, tau, 2.0);
  const Divisor dt = sample_torus_divisor(tau);
  const SectionField st = build_section(dt, gt);
  const auto rho_t = [&](cd z) { return st.normalization() * torus_section_density(dt, tau, z, false); };
  const QuadratureGrid& qt = gt.nodes();
  for (std::size_t i = 0; i < qt.size(); i += 37) {
    const double r = rho_t(qt.z[i]);
    if (r < 1e-3) continue;
    CHECK(st.gradient_energy(Level::Base)[i] ==
          doctest::Approx(oracle::fd_gradient2_torus(rho_t, qt.z[i], tau, 2.0) / r).epsilon(1e-6));
  }
}

TEST_CASE("sections and divisors are validated") {
  CHECK_THROWS_AS(Divisor({}), InvalidDivisor);
  CHECK_THROWS_AS(Divisor({{{1, 0}, 0, false}}), InvalidDivisor);
  CHECK_THROWS_AS(Divisor({{{1, 0}, 1, false}, {{1, 0}, 1, false}}), InvalidDivisor);
  CHECK_THROWS_AS(Divisor({{{}, 1, true}, {{}, 2, true}}), InvalidDivisor);
  CHECK_THROWS_AS(Divisor({{{std::nan(""), 0}, 1, false}}), InvalidDivisor);

  const cd tau(0, 1);
  const SurfaceGrid t = SurfaceGrid::torus(32, tau, 1.0);
  const SurfaceGrid s = SurfaceGrid::sphere(16, 1.0);
  CHECK_THROWS_AS(build_section(Divisor({{{}, 1, true}}), t), InvalidDivisor);
  CHECK_THROWS_AS(build_section(Divisor({{{0.1, 0.1}, 1, false}, {{1.1, 0.1}, 1, false}}), t),
                  InvalidDivisor);
  CHECK_THROWS_AS(build_torus_section(Divisor({{{0.1, 0.1}, 1, false}}), s), ConfigurationError);
  CHECK_THROWS_AS(SectionField::constant(s, -1.0), ConstructionError);
  CHECK(SectionField::constant(s, 0.0).is_zero());
  const SectionField c = SectionField::constant(s, 2.0, 0).scaled(3.0);
  CHECK(c.density()[0] == doctest::Approx(6.0));
}

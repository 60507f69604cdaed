#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "gv/errors.hpp"
#include "gv/geometry.hpp"

using namespace gv;
using oracle::pi;

namespace {

double inner(const ScalarField& a, const ScalarField& b) {
  return integrate(ScalarField(a.grid(), a.values() * b.values()), a.grid());
}

std::vector<SurfaceGrid> grids() {
  return {SurfaceGrid::sphere(32, 2 * pi), SurfaceGrid::sphere(24, 3.7),
          SurfaceGrid::torus(64, {0.0, 1.0}, 1.0), SurfaceGrid::torus(32, {0.31, 1.4}, 5.0)};
}

}  // namespace

TEST_CASE("laplacian is symmetric, nonnegative and kills constants") {
  std::mt19937_64 rng(11);
  for (const SurfaceGrid& g : grids()) {
    const ScalarField a = oracle::random_field(g, rng);
    const ScalarField b = oracle::random_field(g, rng);
    const double scale = l2_norm(laplacian(a, g)) * l2_norm(b);
    CHECK(std::abs(inner(laplacian(a, g), b) - inner(a, laplacian(b, g))) < 1e-10 * scale);
    CHECK(inner(laplacian(a, g), a) > 0.0);
    CHECK(l2_norm(laplacian(ScalarField::constant(g, 3.0), g)) < 1e-10);
  }
}

TEST_CASE("sphere eigenfunctions of low degree") {
  for (double volume : {2 * pi, 1.0, 12.0}) {
    const SurfaceGrid g = SurfaceGrid::sphere(32, volume);
    const double r2 = volume / (4 * pi);
    // cos(theta) and the degree-two zonal harmonic
    const auto p1 = ScalarField::from_nodes(
        g, [](const QuadratureGrid& q, std::size_t i) { return std::cos(q.first[i]); });
    const auto p2 = ScalarField::from_nodes(g, [](const QuadratureGrid& q, std::size_t i) {
      const double x = std::cos(q.first[i]);
      return 1.5 * x * x - 0.5;
    });
    const double lam1 = 4 * pi * g.euler_characteristic() / volume;
    CHECK(lam1 == doctest::Approx(2.0 / r2).epsilon(1e-14));
    const ScalarField l1 = laplacian(p1, g);
    const ScalarField l2 = laplacian(p2, g);
    CHECK(((l1.values() - lam1 * p1.values()).abs().maxCoeff()) < 1e-10 * lam1);
    CHECK(((l2.values() - 6.0 / r2 * p2.values()).abs().maxCoeff()) < 1e-10 * 6.0 / r2);
  }
}

TEST_CASE("torus plane waves are eigenfunctions") {
  const std::complex<double> tau(0.31, 1.4);
  const double volume = 5.0;
  const SurfaceGrid g = SurfaceGrid::torus(32, tau, volume);
  const double s2 = volume / tau.imag();
  for (auto [k, l] : {std::pair{1, 0}, {0, 1}, {2, -3}, {-5, 4}}) {
    const auto w = ScalarField::from_nodes(g, [k, l](const QuadratureGrid& q, std::size_t i) {
      return std::cos(2 * pi * (k * q.first[i] + l * q.second[i])) +
             0.5 * std::sin(2 * pi * (k * q.first[i] + l * q.second[i]));
    });
    const double ky = (l - k * tau.real()) / tau.imag();
    const double lam = 4 * pi * pi / s2 * (k * k + ky * ky);
    const ScalarField lw = laplacian(w, g);
    CHECK(((lw.values() - lam * w.values()).abs().maxCoeff()) < 1e-10 * lam);
  }
}

TEST_CASE("zonal exponential converges with bandlimit") {
  // f = exp(k cos theta), Delta f = -(1/R^2) d/dx((1 - x^2) f'(x))
  const double kappa = 6.0, volume = 2 * pi, r2 = volume / (4 * pi);
  double previous = 1e300;
  for (int L : {8, 12, 16, 24}) {
    const SurfaceGrid g = SurfaceGrid::sphere(L, volume);
    const auto f = ScalarField::from_nodes(g, [&](const QuadratureGrid& q, std::size_t i) {
      return std::exp(kappa * std::cos(q.first[i]));
    });
    const auto exact = ScalarField::from_nodes(g, [&](const QuadratureGrid& q, std::size_t i) {
      const double x = std::cos(q.first[i]);
      const double e = std::exp(kappa * x);
      return -((1 - x * x) * kappa * kappa * e - 2 * x * kappa * e) / r2;
    });
    const double err = (laplacian(f, g).values() - exact.values()).abs().maxCoeff();
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("laplacian matches finite differences off the nodes") {
  // a smooth non-band-limited function, compared at the nodes
  const SurfaceGrid g = SurfaceGrid::sphere(32, 2 * pi);
  const auto fn = [](std::complex<double> z) {
    const double t = 1.0 / (1.0 + std::norm(z));
    return std::exp(0.5 * t) * (1.0 + 0.3 * z.real() * t);
  };
  const auto f = ScalarField::from_nodes(
      g, [&](const QuadratureGrid& q, std::size_t i) { return fn(q.z[i]); });
  const ScalarField lf = laplacian(f, g);
  const QuadratureGrid& q = g.nodes();
  for (std::size_t i = q.cols * 8; i < q.size() - q.cols * 8; i += 97)
    CHECK(lf[i] == doctest::Approx(oracle::fd_laplacian_sphere(fn, q.z[i], g.volume())).epsilon(1e-6));
}

TEST_CASE("poisson solve inverts the laplacian on mean-zero data") {
  std::mt19937_64 rng(5);
  for (const SurfaceGrid& g : grids()) {
    ScalarField a = oracle::random_field(g, rng);
    const double mean = integrate(a, g) / g.volume();
    a = ScalarField(g, a.values() - mean);
    const ScalarField back = poisson_solve(laplacian(a, g), g);
    CHECK((back.values() - a.values()).abs().maxCoeff() < 1e-10 * a.sup_norm());
  }
}

TEST_CASE("poisson solve rejects data with nonzero mean") {
  const SurfaceGrid g = SurfaceGrid::torus(32, {0, 1}, 1.0);
  CHECK_THROWS_AS(poisson_solve(ScalarField::constant(g, 1.0), g), SolvabilityError);
  try {
    poisson_solve(ScalarField::constant(g, 2.0), g);
  } catch (const SolvabilityError& e) {
    CHECK(e.mean() == doctest::Approx(2.0));
  }
}

TEST_CASE("background curvature integrates to 2 pi chi") {
  for (const SurfaceGrid& g : grids()) {
    const double total = g.background_scalar_curvature() * g.volume();
    CHECK(total == doctest::Approx(2 * pi * g.euler_characteristic()).epsilon(1e-14));
    CHECK(integrate(ScalarField::constant(g, 1.0), g) == doctest::Approx(g.volume()).epsilon(1e-13));
  }
  CHECK(SurfaceGrid::sphere(16, 2 * pi).background_scalar_curvature() == doctest::Approx(2.0));
}

TEST_CASE("conformal curvature of a constant rescaling") {
  const SurfaceGrid g = SurfaceGrid::sphere(16, 2 * pi);
  const ScalarField s = conformal_scalar_curvature(ScalarField::constant(g, 0.25), g);
  CHECK((s.values() - 2.0 * std::exp(-0.5)).abs().maxCoeff() < 1e-13);
  // Gauss-Bonnet: the integral of S' against exp(2u) is unchanged
  std::mt19937_64 rng(3);
  const ScalarField u = oracle::random_field(g, rng, 0.2);
  const ScalarField su = conformal_scalar_curvature(u, g);
  const double total = integrate(ScalarField(g, su.values() * (2 * u.values()).exp()), g);
  CHECK(total == doctest::Approx(4 * pi).epsilon(1e-10));
}

TEST_CASE("grid construction is validated") {
  CHECK_THROWS_AS(SurfaceGrid::sphere(4, 1.0), ConfigurationError);
  CHECK_THROWS_AS(SurfaceGrid::sphere(16, -1.0), ConfigurationError);
  CHECK_THROWS_AS(SurfaceGrid::torus(15, {0, 1}, 1.0), ConfigurationError);
  CHECK_THROWS_AS(SurfaceGrid::torus(16, {0, -1}, 1.0), ConfigurationError);
  GridDescriptor bad{2, 16, 0, 1, 1};
  CHECK_THROWS_AS(SurfaceGrid::from_descriptor(bad), ConfigurationError);

  const SurfaceGrid t = SurfaceGrid::torus(32, {0.2, 0.9}, 2.0);
  CHECK(SurfaceGrid::from_descriptor(t.descriptor()).descriptor() == t.descriptor());
  const SurfaceGrid other = SurfaceGrid::torus(32, {0.2, 0.9}, 2.0);
  CHECK_THROWS_AS(laplacian(ScalarField::constant(t, 1.0), other), GridMismatch);
  CHECK_THROWS_AS(ScalarField(t, Eigen::ArrayXd::Zero(3)), GridMismatch);
  Eigen::ArrayXd nan = Eigen::ArrayXd::Zero(t.size());
  nan[4] = std::nan("");
  CHECK_THROWS_AS(ScalarField(t, nan), ConfigurationError);
}

#include "gv/geometry.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include "gv/errors.hpp"

namespace gv {

using std::numbers::pi;

struct SurfaceGrid::Data {
  int genus = 0;
  int resolution = 0;
  std::complex<double> modulus{0.0, 1.0};
  double volume = 0.0;
  std::uint64_t id = 0;
  std::unique_ptr<SpectralBasis> basis;
};

namespace {
std::uint64_t next_grid_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter++;
}
}  // namespace

SurfaceGrid::SurfaceGrid(std::shared_ptr<const Data> data)
    : data_(std::move(data)) {}

SurfaceGrid SurfaceGrid::sphere(int bandlimit, double volume) {
  if (bandlimit < 8)
    throw ConfigurationError("sphere bandlimit must be at least 8");
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw ConfigurationError("surface volume must be positive");
  auto d = std::make_shared<Data>();
  d->genus = 0;
  d->resolution = bandlimit;
  d->volume = volume;
  d->id = next_grid_id();
  d->basis = std::make_unique<SphereBasis>(bandlimit, volume);
  return SurfaceGrid(std::move(d));
}

SurfaceGrid SurfaceGrid::torus(int n, std::complex<double> modulus,
                               double volume) {
  if (n < 16 || n % 2 != 0)
    throw ConfigurationError("torus grid size must be even and at least 16");
  if (!(modulus.imag() > 0.0))
    throw ConfigurationError("torus modulus must have positive imaginary part");
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw ConfigurationError("surface volume must be positive");
  auto d = std::make_shared<Data>();
  d->genus = 1;
  d->resolution = n;
  d->modulus = modulus;
  d->volume = volume;
  d->id = next_grid_id();
  d->basis = std::make_unique<TorusBasis>(n, modulus, volume);
  return SurfaceGrid(std::move(d));
}

SurfaceGrid SurfaceGrid::from_descriptor(const GridDescriptor& d) {
  if (d.genus == 0) return sphere(d.resolution, d.volume);
  if (d.genus == 1)
    return torus(d.resolution, {d.modulus_re, d.modulus_im}, d.volume);
  throw ConfigurationError("only genus 0 and genus 1 surfaces are supported");
}

int SurfaceGrid::genus() const { return data_->genus; }
int SurfaceGrid::resolution() const { return data_->resolution; }
std::complex<double> SurfaceGrid::modulus() const { return data_->modulus; }
double SurfaceGrid::volume() const { return data_->volume; }
double SurfaceGrid::background_scalar_curvature() const {
  return 2.0 * pi * euler_characteristic() / data_->volume;
}
const SpectralBasis& SurfaceGrid::basis() const { return *data_->basis; }
const SphereBasis* SurfaceGrid::sphere_basis() const {
  return dynamic_cast<const SphereBasis*>(data_->basis.get());
}
std::uint64_t SurfaceGrid::id() const { return data_->id; }

GridDescriptor SurfaceGrid::descriptor() const {
  GridDescriptor d;
  d.genus = data_->genus;
  d.resolution = data_->resolution;
  d.modulus_re = data_->genus == 1 ? data_->modulus.real() : 0.0;
  d.modulus_im = data_->genus == 1 ? data_->modulus.imag() : 0.0;
  d.volume = data_->volume;
  return d;
}

ScalarField::ScalarField(SurfaceGrid grid, Eigen::ArrayXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw GridMismatch("field length does not match grid node count");
  if (!values_.allFinite())
    throw ConfigurationError("field contains non-finite values");
}

ScalarField ScalarField::constant(const SurfaceGrid& grid, double value) {
  return ScalarField(grid, Eigen::ArrayXd::Constant(grid.size(), value));
}

ScalarField ScalarField::from_coefficients(const SurfaceGrid& grid,
                                           const Eigen::VectorXd& coeffs) {
  return ScalarField(grid, grid.basis().synthesize(coeffs, Level::Base));
}

ScalarField ScalarField::from_nodes(
    const SurfaceGrid& grid,
    const std::function<double(const QuadratureGrid&, std::size_t)>& fn) {
  const QuadratureGrid& q = grid.nodes();
  Eigen::ArrayXd v(static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) v[Eigen::Index(i)] = fn(q, i);
  return ScalarField(grid, std::move(v));
}

Eigen::VectorXd ScalarField::coefficients() const {
  return grid_.basis().analyze(values_, Level::Base);
}

namespace {
void check_grid(const ScalarField& f, const SurfaceGrid& g) {
  if (!(f.grid() == g)) throw GridMismatch("field does not belong to grid");
}
}  // namespace

ScalarField laplacian(const ScalarField& field, const SurfaceGrid& grid) {
  check_grid(field, grid);
  const SpectralBasis& b = grid.basis();
  Eigen::VectorXd c = b.analyze(field.values(), Level::Base);
  c.array() *= b.laplacian_eigenvalues();
  return ScalarField(grid, b.synthesize(c, Level::Base));
}

ScalarField poisson_solve(const ScalarField& rhs, const SurfaceGrid& grid,
                          double solvability_tolerance) {
  check_grid(rhs, grid);
  const SpectralBasis& b = grid.basis();
  Eigen::VectorXd c = b.analyze(rhs.values(), Level::Base);
  const double norm = std::sqrt((rhs.values().square() * grid.weights()).sum());
  const double mean_mode = c[SpectralBasis::constant_mode];
  if (std::abs(mean_mode) > solvability_tolerance * norm)
    throw SolvabilityError("Poisson right-hand side has nonzero mean",
                           mean_mode / std::sqrt(grid.volume()));
  const Eigen::ArrayXd& ev = b.laplacian_eigenvalues();
  c[SpectralBasis::constant_mode] = 0.0;
  for (Eigen::Index i = 1; i < c.size(); ++i) c[i] /= ev[i];
  return ScalarField(grid, b.synthesize(c, Level::Base));
}

ScalarField conformal_scalar_curvature(const ScalarField& u,
                                       const SurfaceGrid& grid) {
  const ScalarField lap = laplacian(u, grid);
  const double s0 = grid.background_scalar_curvature();
  return ScalarField(grid, (-2.0 * u.values()).exp() * (s0 + lap.values()));
}

double integrate(const ScalarField& field, const SurfaceGrid& grid) {
  check_grid(field, grid);
  return (field.values() * grid.weights()).sum();
}

double l2_norm(const ScalarField& field) {
  return std::sqrt((field.values().square() * field.grid().weights()).sum());
}

}  // namespace gv

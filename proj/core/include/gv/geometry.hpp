#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>

#include <Eigen/Core>

#include "gv/spectral.hpp"

namespace gv {

/// Serializable description of a background surface.
struct GridDescriptor {
  int genus = 0;
  int resolution = 0;  // bandlimit on the sphere, points per side on the torus
  double modulus_re = 0.0;
  double modulus_im = 1.0;
  double volume = 0.0;

  bool operator==(const GridDescriptor&) const = default;
};

/// Discretized constant-curvature background surface: the round sphere
/// (genus 0) or a flat torus (genus 1), scaled to a prescribed area.
///
/// Scalar curvature follows the Kaehler normalization in which
/// S = 2 pi chi / Vol, so that the integral of S over the surface is
/// 2 pi chi (S equals the Gauss curvature). On the round sphere of area
/// 2 pi this gives S = 2 and first nonzero Laplace eigenvalue 4 = 2 S.
///
/// Grids are immutable; copies share the same underlying data.
class SurfaceGrid {
 public:
  static SurfaceGrid sphere(int bandlimit, double volume);
  static SurfaceGrid torus(int n, std::complex<double> modulus, double volume);
  static SurfaceGrid from_descriptor(const GridDescriptor& d);

  int genus() const;
  int euler_characteristic() const { return 2 - 2 * genus(); }
  int resolution() const;
  std::complex<double> modulus() const;
  double volume() const;
  double background_scalar_curvature() const;

  const QuadratureGrid& nodes(Level level = Level::Base) const {
    return basis().grid(level);
  }
  const Eigen::ArrayXd& weights(Level level = Level::Base) const {
    return nodes(level).weights;
  }
  Eigen::Index size(Level level = Level::Base) const {
    return Eigen::Index(nodes(level).size());
  }

  const SpectralBasis& basis() const;
  /// Non-null only on the sphere.
  const SphereBasis* sphere_basis() const;

  GridDescriptor descriptor() const;
  std::uint64_t id() const;

  bool operator==(const SurfaceGrid& other) const { return data_ == other.data_; }

 private:
  struct Data;
  explicit SurfaceGrid(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

/// Samples of a real function at the base nodes of a grid.
class ScalarField {
 public:
  ScalarField(SurfaceGrid grid, Eigen::ArrayXd values);

  static ScalarField constant(const SurfaceGrid& grid, double value);
  static ScalarField from_coefficients(const SurfaceGrid& grid,
                                       const Eigen::VectorXd& coeffs);
  /// Samples fn(node index) at every base node.
  static ScalarField from_nodes(
      const SurfaceGrid& grid,
      const std::function<double(const QuadratureGrid&, std::size_t)>& fn);

  const SurfaceGrid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

  /// Spectral coefficients (exact for band-limited samples).
  Eigen::VectorXd coefficients() const;
  double sup_norm() const { return values_.abs().maxCoeff(); }

 private:
  SurfaceGrid grid_;
  Eigen::ArrayXd values_;
};

/// Nonnegative Laplace operator (positive spectrum, constants to zero).
ScalarField laplacian(const ScalarField& field, const SurfaceGrid& grid);

/// Mean-zero solution of laplacian(psi) = rhs - mean(rhs). Throws
/// SolvabilityError when |integral(rhs)| / sqrt(Vol) exceeds
/// `solvability_tolerance` times the L2 norm of rhs.
ScalarField poisson_solve(const ScalarField& rhs, const SurfaceGrid& grid,
                          double solvability_tolerance = 1e-9);

/// Scalar curvature of exp(2u) * omega: exp(-2u) (S_0 + laplacian(u)).
ScalarField conformal_scalar_curvature(const ScalarField& u,
                                       const SurfaceGrid& grid);

double integrate(const ScalarField& field, const SurfaceGrid& grid);

/// L2 norm with respect to the background area form.
double l2_norm(const ScalarField& field);

}  // namespace gv

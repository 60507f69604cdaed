#pragma once

#include <complex>
#include <optional>

#include <Eigen/Core>

#include "gv/divisor.hpp"
#include "gv/geometry.hpp"

namespace gv {

/// |phi|^2 of a holomorphic section, measured in the constant-curvature
/// (Hermite-Einstein) metric of its line bundle, sampled on both
/// collocation levels. Also carries |grad rho|^2 / rho, which is smooth
/// even at the zeros of the section.
class SectionField {
 public:
  SectionField(SurfaceGrid grid, Eigen::ArrayXd base, Eigen::ArrayXd fine,
               Eigen::ArrayXd base_energy, Eigen::ArrayXd fine_energy,
               int degree, double normalization,
               std::optional<Divisor> divisor);

  /// Formal section with constant density (degree is the nominal c_1).
  static SectionField constant(const SurfaceGrid& grid, double value,
                               int degree = 0);

  const SurfaceGrid& grid() const { return density_.grid(); }
  const ScalarField& density() const { return density_; }
  const Eigen::ArrayXd& samples(Level level) const {
    return level == Level::Base ? density_.values() : fine_;
  }
  const Eigen::ArrayXd& gradient_energy(Level level) const {
    return level == Level::Base ? base_energy_ : fine_energy_;
  }
  int degree() const { return degree_; }
  /// Factor applied to the raw product formula to reach sup density 1.
  double normalization() const { return normalization_; }
  const std::optional<Divisor>& divisor() const { return divisor_; }
  bool is_zero() const { return fine_.abs().maxCoeff() == 0.0; }

  /// The section multiplied by sqrt(s): density scaled by s.
  SectionField scaled(double s) const;

 private:
  ScalarField density_;
  Eigen::ArrayXd fine_;
  Eigen::ArrayXd base_energy_;
  Eigen::ArrayXd fine_energy_;
  int degree_;
  double normalization_;
  std::optional<Divisor> divisor_;
};

/// Unnormalized sphere density: product of chordal distances squared.
double sphere_section_density(const Divisor& divisor, std::complex<double> z);

/// Unnormalized torus density: Gaussian-weighted theta products in the
/// lattice coordinate. With `reduce` false the theta arguments are not
/// shifted to the fundamental domain (used for the periodicity check).
double torus_section_density(const Divisor& divisor,
                             std::complex<double> modulus,
                             std::complex<double> z, bool reduce = true);

SectionField build_sphere_section(const Divisor& divisor,
                                  const SurfaceGrid& grid);
SectionField build_torus_section(const Divisor& divisor,
                                 const SurfaceGrid& grid);
/// Dispatches on the genus of the grid.
SectionField build_section(const Divisor& divisor, const SurfaceGrid& grid);

}  // namespace gv

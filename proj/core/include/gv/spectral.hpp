#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace gv {

/// Which of the two collocation grids of a surface a sample set lives on.
/// `Fine` is the 3/2-padded grid used to evaluate nonlinear terms.
enum class Level { Base, Fine };

/// Tensor-product quadrature grid. Node (i, j) is stored at i * cols + j.
/// On the sphere (first, second) = (colatitude, longitude) and `z` is the
/// stereographic coordinate tan(theta/2) e^{i phi}; on the torus
/// (first, second) are lattice coordinates (a, b) and z = a + b * modulus.
struct QuadratureGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> first;
  std::vector<double> second;
  std::vector<std::complex<double>> z;
  Eigen::ArrayXd weights;

  std::size_t size() const { return z.size(); }
};

/// Orthonormal real basis of band-limited functions on a surface,
/// diagonalizing the (nonnegative) Laplace operator. Coefficients are
/// L2-inner products against the basis, so the Euclidean norm of a
/// coefficient vector is the L2 norm of the field.
class SpectralBasis {
 public:
  virtual ~SpectralBasis() = default;

  Eigen::Index size() const { return eigenvalues_.size(); }
  const Eigen::ArrayXd& laplacian_eigenvalues() const { return eigenvalues_; }
  const QuadratureGrid& grid(Level level) const {
    return level == Level::Base ? base_ : fine_;
  }

  /// Galerkin projection of point samples onto the basis.
  virtual Eigen::VectorXd analyze(const Eigen::ArrayXd& values,
                                  Level level) const = 0;
  /// Point samples of a coefficient vector.
  virtual Eigen::ArrayXd synthesize(const Eigen::VectorXd& coeffs,
                                    Level level) const = 0;

  /// Index of the constant mode (always 0).
  static constexpr Eigen::Index constant_mode = 0;

 protected:
  QuadratureGrid base_;
  QuadratureGrid fine_;
  Eigen::ArrayXd eigenvalues_;
};

/// Real spherical harmonics up to a bandlimit on a round sphere of given
/// area, Gauss-Legendre in colatitude and equispaced in longitude.
class SphereBasis final : public SpectralBasis {
 public:
  SphereBasis(int bandlimit, double volume);
  ~SphereBasis() override;

  Eigen::VectorXd analyze(const Eigen::ArrayXd& values,
                          Level level) const override;
  Eigen::ArrayXd synthesize(const Eigen::VectorXd& coeffs,
                            Level level) const override;

  int bandlimit() const { return bandlimit_; }
  double radius() const { return radius_; }
  int degree(Eigen::Index mode) const { return degree_[mode]; }
  int order(Eigen::Index mode) const { return order_[mode]; }
  /// +1 for cos(m phi) modes (and m = 0), -1 for sin(m phi) modes.
  int parity(Eigen::Index mode) const { return parity_[mode]; }
  /// Coefficient index of (l, m, parity); parity ignored for m = 0.
  Eigen::Index index(int l, int m, int parity = 1) const;
  /// Indices of the three degree-one harmonics (Killing potentials).
  std::vector<Eigen::Index> degree_one_modes() const;

 private:
  struct LevelData;
  const LevelData& level_data(Level level) const;

  int bandlimit_;
  double radius_;
  std::vector<int> degree_;
  std::vector<int> order_;
  std::vector<int> parity_;
  std::vector<Eigen::Index> cos_offset_;
  std::vector<Eigen::Index> sin_offset_;
  std::unique_ptr<LevelData> base_data_;
  std::unique_ptr<LevelData> fine_data_;
};

/// Real trigonometric basis on the flat torus C / (Z + modulus Z), scaled
/// to the requested area. Wave numbers |k|, |l| < n / 2 (Nyquist dropped).
class TorusBasis final : public SpectralBasis {
 public:
  TorusBasis(int n, std::complex<double> modulus, double volume);
  ~TorusBasis() override;

  Eigen::VectorXd analyze(const Eigen::ArrayXd& values,
                          Level level) const override;
  Eigen::ArrayXd synthesize(const Eigen::VectorXd& coeffs,
                            Level level) const override;

  int resolution() const { return n_; }
  /// Ratio between physical length and lattice-plane length.
  double length_scale() const { return scale_; }

 private:
  struct LevelData;
  const LevelData& level_data(Level level) const;

  int n_;
  std::complex<double> modulus_;
  double volume_;
  double scale_;
  std::vector<int> pair_k_;
  std::vector<int> pair_l_;
  std::unique_ptr<LevelData> base_data_;
  std::unique_ptr<LevelData> fine_data_;
};

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace gv

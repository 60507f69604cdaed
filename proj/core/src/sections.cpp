#include "gv/sections.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "gv/errors.hpp"
#include "gv/theta.hpp"

namespace gv {

using cd = std::complex<double>;
using std::numbers::pi;

SectionField::SectionField(SurfaceGrid grid, Eigen::ArrayXd base,
                           Eigen::ArrayXd fine, Eigen::ArrayXd base_energy,
                           Eigen::ArrayXd fine_energy, int degree,
                           double normalization, std::optional<Divisor> divisor)
    : density_(std::move(grid), std::move(base)),
      fine_(std::move(fine)),
      base_energy_(std::move(base_energy)),
      fine_energy_(std::move(fine_energy)),
      degree_(degree),
      normalization_(normalization),
      divisor_(std::move(divisor)) {
  if (fine_.size() != density_.grid().size(Level::Fine) ||
      base_energy_.size() != density_.size() ||
      fine_energy_.size() != fine_.size())
    throw GridMismatch("section samples do not match grid");
  if ((density_.values() < 0.0).any() || (fine_ < 0.0).any())
    throw ConstructionError("section density must be nonnegative");
}

SectionField SectionField::constant(const SurfaceGrid& grid, double value,
                                    int degree) {
  if (!(value >= 0.0)) throw ConstructionError("density must be nonnegative");
  return SectionField(grid, Eigen::ArrayXd::Constant(grid.size(), value),
                      Eigen::ArrayXd::Constant(grid.size(Level::Fine), value),
                      Eigen::ArrayXd::Zero(grid.size()),
                      Eigen::ArrayXd::Zero(grid.size(Level::Fine)), degree, 1.0,
                      std::nullopt);
}

SectionField SectionField::scaled(double s) const {
  if (!(s > 0.0)) throw ConfigurationError("section scale must be positive");
  return SectionField(grid(), s * density_.values(), s * fine_,
                      s * base_energy_, s * fine_energy_, degree_,
                      s * normalization_, divisor_);
}

namespace {

// Sample a density and its gradient energy at the nodes of one level.
struct Samples {
  Eigen::ArrayXd density;
  Eigen::ArrayXd energy;
};

// Hill-climb from the best node with a shrinking compass stencil.
double refine_max(const std::function<double(double, double)>& f, double x,
                  double y, double h) {
  double best = f(x, y);
  while (h > 1e-13) {
    bool moved = false;
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                          {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
      const double v = f(x + dx * h, y + dy * h);
      if (v > best) {
        best = v;
        x += dx * h;
        y += dy * h;
        moved = true;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }
  return best;
}

double sup_estimate(const QuadratureGrid& q, const Eigen::ArrayXd& values,
                    const std::function<double(double, double)>& f,
                    double h) {
  Eigen::Index best = 0;
  values.maxCoeff(&best);
  const std::size_t i = std::size_t(best);
  return std::max(values[best], refine_max(f, q.first[i], q.second[i], h));
}

cd torus_reduce(cd w, cd modulus) {
  double b = w.imag() / modulus.imag();
  double a = w.real() - b * modulus.real();
  a -= std::round(a);
  b -= std::round(b);
  return a + b * modulus;
}

// Holomorphic part Theta, its z-derivative and the Gaussian exponent
// derivative of the torus density at z.
struct TorusPieces {
  cd theta = 1.0;
  cd theta_prime = 0.0;
  double gauss = 0.0;
  cd gauss_dz = 0.0;
};

TorusPieces torus_pieces(const Divisor& divisor, cd modulus, cd z,
                         bool reduce) {
  TorusPieces out;
  const auto& pts = divisor.points();
  std::vector<cd> th(pts.size()), dth(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    cd w = z - pts[j].z;
    if (reduce) w = torus_reduce(w, modulus);
    th[j] = jacobi_theta1(pi * w, modulus);
    dth[j] = pi * jacobi_theta1_prime(pi * w, modulus);
    const int n = pts[j].multiplicity;
    out.gauss += -2.0 * pi * n * w.imag() * w.imag() / modulus.imag();
    out.gauss_dz += cd(0.0, 2.0 * pi * n * w.imag() / modulus.imag());
  }
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const int n = pts[j].multiplicity;
    out.theta *= std::pow(th[j], n);
    cd term = double(n) * dth[j] * std::pow(th[j], n - 1);
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (k != j) term *= std::pow(th[k], pts[k].multiplicity);
    out.theta_prime += term;
  }
  return out;
}

// Polynomial factor P over finite points and Q = P'(1+|z|^2) - N zbar P.
void sphere_pieces(const Divisor& divisor, cd z, double& prefactor,
                   double& q2) {
  const auto& pts = divisor.points();
  const int deg = divisor.degree();
  cd p = 1.0;
  cd dp = 0.0;
  prefactor = 1.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (pts[j].at_infinity) continue;
    const int n = pts[j].multiplicity;
    prefactor /= std::pow(1.0 + std::norm(pts[j].z), n);
    p *= std::pow(z - pts[j].z, n);
    cd term = double(n) * std::pow(z - pts[j].z, n - 1);
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (k != j && !pts[k].at_infinity)
        term *= std::pow(z - pts[k].z, pts[k].multiplicity);
    dp += term;
  }
  const double nz = std::norm(z);
  const cd q = dp * (1.0 + nz) - double(deg) * std::conj(z) * p;
  q2 = std::norm(q) / std::pow(1.0 + nz, deg);
}

}  // namespace

double sphere_section_density(const Divisor& divisor, cd z) {
  double out = 1.0;
  for (const DivisorPoint& p : divisor.points())
    out *= std::pow(chordal_distance2(p, z), p.multiplicity);
  return out;
}

double torus_section_density(const Divisor& divisor, cd modulus, cd z,
                             bool reduce) {
  const TorusPieces t = torus_pieces(divisor, modulus, z, reduce);
  return std::norm(t.theta) * std::exp(t.gauss);
}

SectionField build_sphere_section(const Divisor& divisor,
                                  const SurfaceGrid& grid) {
  if (grid.genus() != 0)
    throw ConfigurationError("sphere section requires a genus-0 grid");
  const double energy_scale = 4.0 * pi / grid.volume();
  auto sample = [&](Level level) {
    const QuadratureGrid& q = grid.nodes(level);
    Samples s{Eigen::ArrayXd(q.z.size()), Eigen::ArrayXd(q.z.size())};
    for (std::size_t i = 0; i < q.z.size(); ++i) {
      const Eigen::Index k = Eigen::Index(i);
      s.density[k] = sphere_section_density(divisor, q.z[i]);
      double pre = 0.0, q2 = 0.0;
      sphere_pieces(divisor, q.z[i], pre, q2);
      s.energy[k] = energy_scale * pre * q2;
    }
    return s;
  };
  Samples base = sample(Level::Base);
  Samples fine = sample(Level::Fine);
  const QuadratureGrid& qf = grid.nodes(Level::Fine);
  const double h = pi / qf.cols;
  const double sup = sup_estimate(
      qf, fine.density,
      [&](double theta, double phi) {
        return sphere_section_density(
            divisor, std::tan(0.5 * theta) * std::polar(1.0, phi));
      },
      h);
  if (!(sup > 0.0)) throw ConstructionError("section vanishes identically");
  const double scale = 1.0 / sup;
  return SectionField(grid, scale * base.density, scale * fine.density,
                      scale * base.energy, scale * fine.energy,
                      divisor.degree(), scale, divisor);
}

SectionField build_torus_section(const Divisor& divisor,
                                 const SurfaceGrid& grid) {
  if (grid.genus() != 1)
    throw ConfigurationError("torus section requires a genus-1 grid");
  const cd tau = grid.modulus();
  const auto& pts = divisor.points();
  for (const DivisorPoint& p : pts)
    if (p.at_infinity)
      throw InvalidDivisor("torus divisor cannot contain infinity");
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(torus_reduce(pts[i].z - pts[j].z, tau)) < 1e-12)
        throw InvalidDivisor("divisor points collide modulo the lattice");

  const double s = std::sqrt(grid.volume() / tau.imag());
  auto sample = [&](Level level) {
    const QuadratureGrid& q = grid.nodes(level);
    Samples out{Eigen::ArrayXd(q.z.size()), Eigen::ArrayXd(q.z.size())};
    for (std::size_t i = 0; i < q.z.size(); ++i) {
      const Eigen::Index k = Eigen::Index(i);
      const TorusPieces t = torus_pieces(divisor, tau, q.z[i], true);
      const double g = std::exp(t.gauss);
      out.density[k] = std::norm(t.theta) * g;
      out.energy[k] =
          4.0 / (s * s) * g * std::norm(t.theta_prime + t.theta * t.gauss_dz);
    }
    return out;
  };
  Samples base = sample(Level::Base);
  Samples fine = sample(Level::Fine);

  // Quasi-periodicity of the unreduced product must cancel exactly.
  double defect = 0.0;
  double ref = 0.0;
  for (double a : {0.13, 0.41, 0.77})
    for (double b : {0.29, 0.58, 0.91}) {
      const cd z = a + b * tau;
      const double r0 = torus_section_density(divisor, tau, z, false);
      const double r1 = torus_section_density(divisor, tau, z + 1.0, false);
      const double r2 = torus_section_density(divisor, tau, z + tau, false);
      ref = std::max(ref, r0);
      defect = std::max({defect, std::abs(r1 - r0), std::abs(r2 - r0)});
    }
  if (!(ref > 0.0) || defect > 1e-10 * ref)
    throw ConstructionError("torus section fails the periodicity check");

  const QuadratureGrid& qf = grid.nodes(Level::Fine);
  const double sup = sup_estimate(
      qf, fine.density,
      [&](double a, double b) {
        return torus_section_density(divisor, tau, a + b * tau);
      },
      1.0 / qf.cols);
  if (!(sup > 0.0)) throw ConstructionError("section vanishes identically");
  const double scale = 1.0 / sup;
  return SectionField(grid, scale * base.density, scale * fine.density,
                      scale * base.energy, scale * fine.energy,
                      divisor.degree(), scale, divisor);
}

SectionField build_section(const Divisor& divisor, const SurfaceGrid& grid) {
  return grid.genus() == 0 ? build_sphere_section(divisor, grid)
                           : build_torus_section(divisor, grid);
}

}  // namespace gv

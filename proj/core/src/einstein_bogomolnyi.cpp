#include "gv/einstein_bogomolnyi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gv/errors.hpp"
#include "gv/git.hpp"
#include "gv/newton.hpp"
#include "gv/vortex.hpp"

namespace gv {

using std::numbers::pi;

bool eb_parameter_check(double alpha, double tau, int degree) {
  return std::abs(alpha * tau * degree - 1.0) < 1e-12;
}

std::string to_string(YangCase c) {
  switch (c) {
    case YangCase::Symmetric: return "Symmetric";
    case YangCase::Stable: return "Stable";
    case YangCase::Neither: return "Neither";
  }
  return "Unknown";
}

YangCase yang_hypothesis_check(const Divisor& divisor) {
  const int n = divisor.degree();
  const auto& pts = divisor.points();
  if (n % 2 == 0 && pts.size() == 2 && 2 * pts[0].multiplicity == n)
    return YangCase::Symmetric;
  if (2 * divisor.max_multiplicity() < n) return YangCase::Stable;
  return YangCase::Neither;
}

double EBProblem::alpha() const { return 1.0 / (tau * section.degree()); }

namespace {

bool is_polar_symmetric(const Divisor& d) {
  const auto& pts = d.points();
  if (pts.size() != 2 || pts[0].multiplicity != pts[1].multiplicity) return false;
  bool zero = false, inf = false;
  for (const DivisorPoint& p : pts) {
    if (p.at_infinity) inf = true;
    else if (p.z == std::complex<double>(0.0, 0.0)) zero = true;
  }
  return zero && inf;
}

// Unknowns [f coefficients; c'] (c' only under the volume policy).
class EBSystem final : public NonlinearSystem {
 public:
  EBSystem(const EBProblem& p, bool projection)
      : p_(p),
        basis_(p.grid.basis()),
        rho_(p.section.samples(Level::Fine)),
        weights_(p.grid.weights(Level::Fine)),
        n_(p.grid.basis().size()),
        alpha_(p.alpha()),
        flux_constant_(2.0 * pi * p.section.degree() / p.grid.volume()),
        bordered_(p.policy == CPrimePolicy::Volume) {
    if (projection) frozen_ = p.grid.sphere_basis()->degree_one_modes();
  }

  Eigen::Index size() const override { return n_ + (bordered_ ? 1 : 0); }

  double c_prime(const Eigen::VectorXd& x) const {
    return bordered_ ? x[n_] : p_.c_prime;
  }

  void fields(const Eigen::VectorXd& x, Eigen::ArrayXd& e2u,
              Eigen::ArrayXd& psi) const {
    const Eigen::ArrayXd f = basis_.synthesize(x.head(n_), Level::Fine);
    psi = (2.0 * f).exp() * rho_;
    e2u = (2.0 * (2.0 * alpha_ * p_.tau * f - alpha_ * psi + c_prime(x))).exp();
  }

  Eigen::VectorXd equation(const Eigen::VectorXd& x) const {
    Eigen::ArrayXd e2u, psi;
    fields(x, e2u, psi);
    Eigen::VectorXd r =
        basis_.analyze(0.5 * e2u * (psi - p_.tau) + flux_constant_, Level::Fine);
    r.array() += basis_.laplacian_eigenvalues() * x.head(n_).array();
    return r;
  }

  double volume(const Eigen::VectorXd& x) const {
    Eigen::ArrayXd e2u, psi;
    fields(x, e2u, psi);
    return (e2u * weights_).sum();
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const override {
    Eigen::VectorXd out(size());
    out.head(n_) = equation(x);
    for (Eigen::Index m : frozen_) out[m] = x[m];
    if (bordered_)
      out[n_] = (volume(x) - p_.target_volume) / std::sqrt(p_.grid.volume());
    return out;
  }

  void linearize_at(const Eigen::VectorXd& x) override {
    Eigen::ArrayXd psi;
    fields(x, e2u_, psi);
    coef_ = e2u_ * (psi - 2.0 * alpha_ * (psi - p_.tau).square());
    dcp_ = e2u_ * (psi - p_.tau);
    du_df_ = 2.0 * alpha_ * (p_.tau - psi);
    const double v = p_.grid.volume();
    shift_ = std::abs((coef_ * weights_).sum() / v);
    mean_e2u_ = (e2u_ * weights_).sum() / v;
  }

  Eigen::VectorXd apply_jacobian(const Eigen::VectorXd& v) const override {
    const Eigen::ArrayXd fd = basis_.synthesize(v.head(n_), Level::Fine);
    const double cd = bordered_ ? v[n_] : 0.0;
    Eigen::VectorXd out(size());
    out.head(n_) = basis_.analyze(coef_ * fd + dcp_ * cd, Level::Fine);
    out.head(n_).array() += basis_.laplacian_eigenvalues() * v.head(n_).array();
    for (Eigen::Index m : frozen_) out[m] = v[m];
    if (bordered_)
      out[n_] = 2.0 * (e2u_ * (du_df_ * fd + cd) * weights_).sum() /
                std::sqrt(p_.grid.volume());
    return out;
  }

  Eigen::VectorXd precondition(const Eigen::VectorXd& r) const override {
    Eigen::VectorXd out(size());
    out.head(n_) =
        (r.head(n_).array() / (basis_.laplacian_eigenvalues() + shift_)).matrix();
    for (Eigen::Index m : frozen_) out[m] = r[m];
    if (bordered_)
      out[n_] = r[n_] / (2.0 * mean_e2u_ * std::sqrt(p_.grid.volume()));
    return out;
  }

  const std::vector<Eigen::Index>& frozen() const { return frozen_; }

 private:
  const EBProblem& p_;
  const SpectralBasis& basis_;
  const Eigen::ArrayXd& rho_;
  const Eigen::ArrayXd& weights_;
  Eigen::Index n_;
  double alpha_;
  double flux_constant_;
  bool bordered_;
  std::vector<Eigen::Index> frozen_;
  Eigen::ArrayXd e2u_;
  Eigen::ArrayXd coef_;
  Eigen::ArrayXd dcp_;
  Eigen::ArrayXd du_df_;
  double shift_ = 1.0;
  double mean_e2u_ = 1.0;
};

void validate(const EBProblem& p) {
  if (p.grid.genus() != 0)
    throw ConfigurationError(
        "c = 0 with positive degree forces the surface to be the sphere");
  if (!(p.section.grid() == p.grid))
    throw GridMismatch("section was built on a different grid");
  if (p.section.degree() < 1 || p.section.is_zero())
    throw ConfigurationError("Einstein-Bogomol'nyi runs need a nonzero section of positive degree");
  if (!(p.tau > 0.0)) throw ConfigurationError("tau must be positive");
  if (p.policy == CPrimePolicy::Volume && !(p.target_volume > 0.0))
    throw ConfigurationError("target volume must be positive");
  if (!bradlow_gate(p.section.degree(), p.tau, p.grid.volume()))
    throw NoSolutionExists("Bradlow bound 4 pi N < tau Vol violated",
                           4.0 * pi * p.section.degree(),
                           p.tau * p.grid.volume());
}

}  // namespace

ScalarField eb_conformal_potential(const ScalarField& f, double c_prime,
                                   const EBProblem& problem) {
  const double a = problem.alpha();
  const Eigen::ArrayXd psi =
      (2.0 * f.values()).exp() * problem.section.density().values();
  return ScalarField(problem.grid,
                     2.0 * a * problem.tau * f.values() - a * psi + c_prime);
}

ScalarField eb_residual(const ScalarField& f, double c_prime,
                        const EBProblem& problem) {
  EBProblem fixed = problem;
  fixed.policy = CPrimePolicy::Fixed;
  fixed.c_prime = c_prime;
  EBSystem sys(fixed, false);
  return ScalarField::from_coefficients(problem.grid,
                                        sys.equation(f.coefficients()));
}

EBSolution solve_eb(const EBProblem& problem,
                    const std::optional<ScalarField>& initial) {
  validate(problem);
  const YangCase yang = problem.section.divisor()
                            ? yang_hypothesis_check(*problem.section.divisor())
                            : YangCase::Neither;
  const bool projection = problem.kernel_projection.value_or(
      problem.section.divisor() && is_polar_symmetric(*problem.section.divisor()));

  EBSystem sys(problem, projection);
  const Eigen::Index n = problem.grid.basis().size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.size());
  const double vol = problem.grid.volume();
  if (initial) {
    if (!(initial->grid() == problem.grid))
      throw GridMismatch("initial guess lives on a different grid");
    x.head(n) = initial->coefficients();
  } else {
    // Constant f balancing the integrated equation for the target area.
    const double area =
        problem.policy == CPrimePolicy::Volume ? problem.target_volume : vol;
    const double mass = (problem.section.samples(Level::Fine) *
                         problem.grid.weights(Level::Fine))
                            .sum() / vol;
    const double level =
        std::max(problem.tau - 4.0 * pi * problem.section.degree() / area,
                 1e-3 * problem.tau);
    x[SpectralBasis::constant_mode] =
        0.5 * std::log(level / mass) * std::sqrt(vol);
  }
  for (Eigen::Index m : sys.frozen()) x[m] = 0.0;
  if (problem.policy == CPrimePolicy::Volume) {
    x[n] = problem.c_prime;
    if (!initial) {
      // pick c' so that the constant guess already has the target area
      x[n] = 0.0;
      const double v0 = sys.volume(x);
      x[n] = 0.5 * std::log(problem.target_volume / v0);
    }
  }

  NewtonOptions opts;
  opts.tolerance = problem.tolerance;
  opts.max_iterations = problem.max_iterations;
  opts.gmres_restart = 120;
  NewtonResult r = newton_solve(sys, std::move(x), opts,
                                "Einstein-Bogomol'nyi solve");

  const double cp = sys.c_prime(r.x);
  EBSolution out{ScalarField::from_coefficients(problem.grid, r.x.head(n)),
                 ScalarField::constant(problem.grid, 0.0),
                 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, {}, YangCase::Neither, false, false};
  out.u = eb_conformal_potential(out.f, cp, problem);
  out.c_prime = cp;
  out.residual_norm = sys.equation(r.x).norm();
  Eigen::ArrayXd e2u, psi;
  sys.fields(r.x, e2u, psi);
  const Eigen::ArrayXd& w = problem.grid.weights(Level::Fine);
  out.conformal_volume = (e2u * w).sum();
  out.integrated_identity_defect =
      std::abs((e2u * (psi - problem.tau) * w).sum() +
               4.0 * pi * problem.section.degree());
  out.max_e2u = e2u.maxCoeff();
  out.min_e2u = e2u.minCoeff();
  out.iterations = r.iterations;
  out.history = std::move(r.history);
  out.yang = yang;
  out.experimental = yang == YangCase::Neither;
  out.kernel_projection = projection;
  if (!(out.residual_norm <= problem.tolerance))
    throw ConvergenceFailure("Einstein-Bogomol'nyi residual above tolerance",
                             out.residual_norm, out.iterations, out.history);
  return out;
}

}  // namespace gv

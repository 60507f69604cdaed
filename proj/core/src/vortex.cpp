#include "gv/vortex.hpp"

#include <cmath>
#include <numbers>

#include "gv/errors.hpp"
#include "gv/newton.hpp"

namespace gv {

using std::numbers::pi;

bool bradlow_gate(int degree, double tau, double volume) {
  return 4.0 * pi * degree < tau * volume;
}

namespace {

class VortexSystem final : public NonlinearSystem {
 public:
  explicit VortexSystem(const VortexProblem& p)
      : p_(p),
        basis_(p.grid.basis()),
        rho_(p.section.samples(Level::Fine)),
        constant_(2.0 * pi * p.section.degree() / p.grid.volume()) {}

  Eigen::Index size() const override { return basis_.size(); }

  Eigen::VectorXd residual(const Eigen::VectorXd& c) const override {
    const Eigen::ArrayXd f = basis_.synthesize(c, Level::Fine);
    const Eigen::ArrayXd nonlinear =
        0.5 * ((2.0 * f).exp() * rho_ - p_.tau) + constant_;
    Eigen::VectorXd r = basis_.analyze(nonlinear, Level::Fine);
    r.array() += basis_.laplacian_eigenvalues() * c.array();
    return r;
  }

  void linearize_at(const Eigen::VectorXd& c) override {
    weight_ = (2.0 * basis_.synthesize(c, Level::Fine)).exp() * rho_;
    shift_ = (weight_ * p_.grid.weights(Level::Fine)).sum() / p_.grid.volume();
  }

  Eigen::VectorXd apply_jacobian(const Eigen::VectorXd& v) const override {
    Eigen::VectorXd out =
        basis_.analyze(weight_ * basis_.synthesize(v, Level::Fine), Level::Fine);
    out.array() += basis_.laplacian_eigenvalues() * v.array();
    return out;
  }

  Eigen::VectorXd precondition(const Eigen::VectorXd& r) const override {
    return (r.array() / (basis_.laplacian_eigenvalues() + shift_)).matrix();
  }

  bool jacobian_is_spd() const override { return true; }

 private:
  const VortexProblem& p_;
  const SpectralBasis& basis_;
  const Eigen::ArrayXd& rho_;
  double constant_;
  Eigen::ArrayXd weight_;
  double shift_ = 1.0;
};

void validate(const VortexProblem& p) {
  if (!(p.section.grid() == p.grid))
    throw GridMismatch("section was built on a different grid");
  if (!(p.tau > 0.0)) throw ConfigurationError("tau must be positive");
  if (!(p.tolerance > 0.0 && p.tolerance < 1e-4))
    throw ConfigurationError("vortex tolerance must lie in (0, 1e-4)");
  if (p.section.is_zero())
    throw ConfigurationError("section must not vanish identically");
}

}  // namespace

Eigen::VectorXd vortex_residual(const Eigen::VectorXd& f_coeffs,
                                const VortexProblem& problem) {
  return VortexSystem(problem).residual(f_coeffs);
}

VortexSolution solve_vortex(const VortexProblem& problem,
                            const std::optional<ScalarField>& initial) {
  validate(problem);
  const int n = problem.section.degree();
  const double volume = problem.grid.volume();
  const double excess = problem.tau * volume - 4.0 * pi * n;
  if (!bradlow_gate(n, problem.tau, volume))
    throw NoSolutionExists(
        "Bradlow bound 4 pi N < tau Vol violated", 4.0 * pi * n,
        problem.tau * volume);

  VortexSolution out{ScalarField::constant(problem.grid, 0.0), 0.0, 0, 0.0, {}, {}};
  const bool near_boundary = excess < 0.05 * std::max(1.0, 4.0 * pi * n);
  if (near_boundary)
    out.warnings.push_back("tau Vol is close to the Bradlow bound");

  NewtonOptions opts;
  opts.tolerance = problem.tolerance;
  opts.max_iterations = problem.max_iterations > 0 ? problem.max_iterations
                        : near_boundary            ? 500
                                                   : 100;

  Eigen::VectorXd x0;
  if (initial) {
    if (!(initial->grid() == problem.grid))
      throw GridMismatch("initial guess lives on a different grid");
    x0 = initial->coefficients();
  } else {
    const double mass = (problem.section.samples(Level::Fine) *
                         problem.grid.weights(Level::Fine))
                            .sum();
    const double f0 = 0.5 * std::log(excess) - 0.5 * std::log(mass);
    x0 = Eigen::VectorXd::Zero(problem.grid.basis().size());
    x0[SpectralBasis::constant_mode] = f0 * std::sqrt(volume);
  }

  VortexSystem system(problem);
  NewtonResult r = newton_solve(system, std::move(x0), opts, "vortex solve");
  out.f = ScalarField::from_coefficients(problem.grid, r.x);
  out.residual_norm = r.residual;
  out.iterations = r.iterations;
  out.history = std::move(r.history);
  out.flux_defect = flux_identity_check(out, problem);
  return out;
}

double flux_identity_check(const VortexSolution& solution,
                           const VortexProblem& problem) {
  const SurfaceGrid& g = problem.grid;
  const Eigen::ArrayXd f =
      g.basis().synthesize(solution.f.coefficients(), Level::Fine);
  const double flux = ((2.0 * f).exp() * problem.section.samples(Level::Fine) *
                       g.weights(Level::Fine))
                          .sum();
  return std::abs(flux - (problem.tau * g.volume() -
                          4.0 * pi * problem.section.degree()));
}

}  // namespace gv

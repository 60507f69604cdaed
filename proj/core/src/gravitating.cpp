#include "gv/gravitating.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "grav_system.hpp"
#include "gv/errors.hpp"
#include "gv/krylov.hpp"
#include "gv/newton.hpp"

namespace gv {

using std::numbers::pi;

double compute_c(double alpha, double tau, int degree, int chi, double volume) {
  return 2.0 * pi * (chi - 2.0 * alpha * tau * degree) / volume;
}

double GravProblem::c() const {
  return compute_c(alpha, tau, section.degree(), grid.euler_characteristic(),
                   grid.volume());
}

namespace detail {

GravSystem::GravSystem(const GravProblem& p, bool solver_rows)
    : basis_(p.grid.basis()),
      rho_(p.section.samples(Level::Fine)),
      weights_(p.grid.weights(Level::Fine)),
      n_(p.grid.basis().size()),
      tau_(p.tau),
      alpha_(p.alpha),
      c_(p.c()),
      flux_constant_(2.0 * pi * p.section.degree() / p.grid.volume()),
      volume_(p.grid.volume()),
      solver_rows_(solver_rows) {
  if (solver_rows && p.kernel_projection) {
    const SphereBasis* sb = p.grid.sphere_basis();
    if (!sb)
      throw ConfigurationError("kernel projection is only defined on the sphere");
    frozen_ = sb->degree_one_modes();
  }
}

void GravSystem::true_residual(const Eigen::VectorXd& x, Eigen::VectorXd& r1,
                               Eigen::VectorXd& r2) const {
  const auto cu = x.head(n_);
  const auto cf = x.tail(n_);
  const Eigen::ArrayXd u = basis_.synthesize(cu, Level::Fine);
  const Eigen::ArrayXd f = basis_.synthesize(cf, Level::Fine);
  const Eigen::ArrayXd e2u = (2.0 * u).exp();
  const Eigen::ArrayXd psi = (2.0 * f).exp() * rho_;
  const Eigen::ArrayXd& ev = basis_.laplacian_eigenvalues();

  r1 = basis_.analyze(0.5 * e2u * (psi - tau_) + flux_constant_, Level::Fine);
  r1.array() += ev * cf.array();

  const Eigen::VectorXd psi_c = basis_.analyze(psi, Level::Fine);
  r2 = basis_.analyze(c_ * (1.0 - e2u), Level::Fine);
  r2.array() +=
      ev * (cu.array() + alpha_ * psi_c.array() - 2.0 * alpha_ * tau_ * cf.array());
}

double GravSystem::conformal_volume(const Eigen::VectorXd& x) const {
  const Eigen::ArrayXd u = basis_.synthesize(x.head(n_), Level::Fine);
  return ((2.0 * u).exp() * weights_).sum();
}

Eigen::VectorXd GravSystem::residual(const Eigen::VectorXd& x) const {
  Eigen::VectorXd r1, r2;
  true_residual(x, r1, r2);
  if (solver_rows_) {
    r2[SpectralBasis::constant_mode] =
        (volume_ - conformal_volume(x)) / std::sqrt(volume_);
    for (Eigen::Index m : frozen_) r2[m] = x[m];
  }
  Eigen::VectorXd out(2 * n_);
  out << r2, r1;
  return out;
}

void GravSystem::linearize_at(const Eigen::VectorXd& x) {
  e2u_ = (2.0 * basis_.synthesize(x.head(n_), Level::Fine)).exp();
  psi_ = (2.0 * basis_.synthesize(x.tail(n_), Level::Fine)).exp() * rho_;
  mean_e2u_ = (e2u_ * weights_).sum() / volume_;
  mean_e2u_psi_ = (e2u_ * psi_ * weights_).sum() / volume_;
}

void GravSystem::true_derivative(const Eigen::VectorXd& v, Eigen::VectorXd& d1,
                                 Eigen::VectorXd& d2) const {
  const auto vu = v.head(n_);
  const auto vf = v.tail(n_);
  const Eigen::ArrayXd ud = basis_.synthesize(vu, Level::Fine);
  const Eigen::ArrayXd fd = basis_.synthesize(vf, Level::Fine);
  const Eigen::ArrayXd& ev = basis_.laplacian_eigenvalues();

  d1 = basis_.analyze(e2u_ * ((psi_ - tau_) * ud + psi_ * fd), Level::Fine);
  d1.array() += ev * vf.array();

  const Eigen::VectorXd coupling =
      basis_.analyze(2.0 * alpha_ * (psi_ - tau_) * fd, Level::Fine);
  d2 = basis_.analyze(-2.0 * c_ * e2u_ * ud, Level::Fine);
  d2.array() += ev * (vu.array() + coupling.array());
}

Eigen::VectorXd GravSystem::apply_jacobian(const Eigen::VectorXd& v) const {
  Eigen::VectorXd d1, d2;
  true_derivative(v, d1, d2);
  if (solver_rows_) {
    const Eigen::ArrayXd ud = basis_.synthesize(v.head(n_), Level::Fine);
    d2[SpectralBasis::constant_mode] =
        -2.0 * (e2u_ * ud * weights_).sum() / std::sqrt(volume_);
    for (Eigen::Index m : frozen_) d2[m] = v[m];
  }
  Eigen::VectorXd out(2 * n_);
  out << d2, d1;
  return out;
}

Eigen::VectorXd GravSystem::precondition(const Eigen::VectorXd& r) const {
  const Eigen::ArrayXd& ev = basis_.laplacian_eigenvalues();
  Eigen::VectorXd out(2 * n_);
  const double shift = 2.0 * c_ * mean_e2u_;
  for (Eigen::Index i = 0; i < n_; ++i) {
    double d = ev[i] - shift;
    if (std::abs(d) < 0.25 * ev[i]) d = ev[i] + std::abs(shift);
    if (i == SpectralBasis::constant_mode)
      d = solver_rows_ ? -2.0 * mean_e2u_ : (shift != 0.0 ? -shift : 1.0);
    out[i] = r[i] / d;
    out[n_ + i] = r[n_ + i] / (ev[i] + mean_e2u_psi_);
  }
  for (Eigen::Index m : frozen_) out[m] = r[m];
  return out;
}

Eigen::VectorXd GravSystem::solve_vortex_block(const Eigen::VectorXd& rhs) const {
  const Eigen::ArrayXd& ev = basis_.laplacian_eigenvalues();
  const LinearOperator apply = [&](const Eigen::VectorXd& g) {
    Eigen::VectorXd out = basis_.analyze(
        e2u_ * psi_ * basis_.synthesize(g, Level::Fine), Level::Fine);
    out.array() += ev * g.array();
    return out;
  };
  const LinearOperator precond = [&](const Eigen::VectorXd& g) {
    return Eigen::VectorXd(g.array() / (ev + mean_e2u_psi_));
  };
  return conjugate_gradient(apply, rhs, precond, 1e-15, 4 * int(n_)).x;
}

}  // namespace detail

namespace {

void validate(const GravProblem& p) {
  if (!(p.section.grid() == p.grid))
    throw GridMismatch("section was built on a different grid");
  if (!(p.tau > 0.0)) throw ConfigurationError("tau must be positive");
  if (!std::isfinite(p.alpha)) throw ConfigurationError("alpha must be finite");
  if (!(p.tolerance > 0.0)) throw ConfigurationError("tolerance must be positive");
  if (p.section.is_zero())
    throw ConfigurationError("section must not vanish identically");
  if (p.kernel_projection && p.grid.genus() != 0)
    throw ConfigurationError("kernel projection is only defined on the sphere");
}

Eigen::VectorXd stack(const ScalarField& u, const ScalarField& f) {
  Eigen::VectorXd x(2 * u.grid().basis().size());
  x << u.coefficients(), f.coefficients();
  return x;
}

}  // namespace

GravResidual residual(const ScalarField& u, const ScalarField& f,
                      const GravProblem& problem) {
  if (!(u.grid() == problem.grid) || !(f.grid() == problem.grid))
    throw GridMismatch("fields do not belong to the problem grid");
  detail::GravSystem sys(problem, false);
  Eigen::VectorXd r1, r2;
  sys.true_residual(stack(u, f), r1, r2);
  return {ScalarField::from_coefficients(problem.grid, r1),
          ScalarField::from_coefficients(problem.grid, r2)};
}

GravLinearization::GravLinearization(const ScalarField& u, const ScalarField& f,
                                     const GravProblem& problem)
    : grid_(problem.grid),
      alpha_(problem.alpha),
      tau_(problem.tau),
      c_(problem.c()) {
  if (!(u.grid() == grid_) || !(f.grid() == grid_))
    throw GridMismatch("fields do not belong to the problem grid");
  const SpectralBasis& b = grid_.basis();
  e2u_ = (2.0 * b.synthesize(u.coefficients(), Level::Fine)).exp();
  psi_ = (2.0 * b.synthesize(f.coefficients(), Level::Fine)).exp() *
         problem.section.samples(Level::Fine);
}

std::pair<ScalarField, ScalarField> GravLinearization::apply(
    const ScalarField& u_dot, const ScalarField& f_dot) const {
  if (!(u_dot.grid() == grid_) || !(f_dot.grid() == grid_))
    throw GridMismatch("directions do not belong to the problem grid");
  const SpectralBasis& b = grid_.basis();
  const Eigen::VectorXd cu = u_dot.coefficients();
  const Eigen::VectorXd cf = f_dot.coefficients();
  const Eigen::ArrayXd ud = b.synthesize(cu, Level::Fine);
  const Eigen::ArrayXd fd = b.synthesize(cf, Level::Fine);
  const Eigen::ArrayXd& ev = b.laplacian_eigenvalues();

  Eigen::VectorXd d1 =
      b.analyze(e2u_ * ((psi_ - tau_) * ud + psi_ * fd), Level::Fine);
  d1.array() += ev * cf.array();
  const Eigen::VectorXd coupling =
      b.analyze(2.0 * alpha_ * (psi_ - tau_) * fd, Level::Fine);
  Eigen::VectorXd d2 = b.analyze(-2.0 * c_ * e2u_ * ud, Level::Fine);
  d2.array() += ev * (cu.array() + coupling.array());
  return {ScalarField::from_coefficients(grid_, d1),
          ScalarField::from_coefficients(grid_, d2)};
}

GravLinearization linearize(const ScalarField& u, const ScalarField& f,
                            const GravProblem& problem) {
  return GravLinearization(u, f, problem);
}

NearKernel killing_probe(const ScalarField& u, const ScalarField& f,
                         const GravProblem& problem) {
  const SphereBasis* sb = problem.grid.sphere_basis();
  if (!sb) throw ConfigurationError("Killing probe is only defined on the sphere");
  GravProblem unprojected = problem;
  unprojected.kernel_projection = false;
  detail::GravSystem sys(unprojected, true);
  const Eigen::Index n = sys.modes();
  const Eigen::VectorXd x = stack(u, f);
  sys.linearize_at(x);

  const std::vector<Eigen::Index> modes = sb->degree_one_modes();
  const Eigen::Index k = Eigen::Index(modes.size());
  Eigen::MatrixXd dirs = Eigen::MatrixXd::Zero(2 * n, k);
  Eigen::MatrixXd images(2 * n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n);
    v[modes[std::size_t(j)]] = 1.0;
    Eigen::VectorXd d1, d2;
    sys.true_derivative(v, d1, d2);
    v.tail(n) = sys.solve_vortex_block(-d1);
    dirs.col(j) = v;
    images.col(j) = sys.apply_jacobian(v);
  }
  // min over span of |J v| / |v|: generalized symmetric eigenproblem
  const Eigen::MatrixXd a = images.transpose() * images;
  const Eigen::MatrixXd b = dirs.transpose() * dirs;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  NearKernel out;
  out.sigma = std::sqrt(std::max(0.0, es.eigenvalues()[0]));
  Eigen::VectorXd v = dirs * es.eigenvectors().col(0);
  v /= v.norm();
  out.u_coefficients = v.head(n);
  out.f_coefficients = v.tail(n);
  return out;
}

Eigen::MatrixXd jacobian_matrix(const ScalarField& u, const ScalarField& f,
                                const GravProblem& problem) {
  detail::GravSystem sys(problem, true);
  sys.linearize_at(stack(u, f));
  const Eigen::Index m = sys.size();
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    e[j] = 1.0;
    jac.col(j) = sys.apply_jacobian(e);
    e[j] = 0.0;
  }
  return jac;
}

NearKernel smallest_singular(const ScalarField& u, const ScalarField& f,
                             const GravProblem& problem) {
  const Eigen::MatrixXd jac = jacobian_matrix(u, f, problem);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
  const Eigen::Index last = svd.singularValues().size() - 1;
  const Eigen::Index n = jac.cols() / 2;
  NearKernel out;
  out.sigma = svd.singularValues()[last];
  const Eigen::VectorXd v = svd.matrixV().col(last);
  out.u_coefficients = v.head(n);
  out.f_coefficients = v.tail(n);
  return out;
}

GravSolution solve_grav(const GravProblem& problem, const ScalarField& u0,
                        const ScalarField& f0) {
  validate(problem);
  if (!(u0.grid() == problem.grid) || !(f0.grid() == problem.grid))
    throw GridMismatch("initial fields do not belong to the problem grid");

  detail::GravSystem sys(problem, true);
  const Eigen::Index n = sys.modes();
  Eigen::VectorXd x = stack(u0, f0);
  for (Eigen::Index m : sys.frozen_modes()) x[m] = 0.0;

  if (problem.grid.genus() == 0 && !problem.kernel_projection) {
    const NearKernel probe = killing_probe(u0, f0, problem);
    if (probe.sigma < 1e-6)
      throw SingularJacobian(
          "linearization is singular along degree-one harmonics of u",
          probe.sigma, {probe.u_coefficients, probe.f_coefficients});
  }

  NewtonOptions opts;
  opts.tolerance = problem.tolerance / std::max(1.0, std::abs(problem.c()));
  opts.max_iterations = problem.max_iterations;
  NewtonResult r = newton_solve(sys, std::move(x), opts, "gravitating vortex solve");

  Eigen::VectorXd r1, r2;
  sys.true_residual(r.x, r1, r2);
  GravSolution out{ScalarField::from_coefficients(problem.grid, r.x.head(n)),
                   ScalarField::from_coefficients(problem.grid, r.x.tail(n)),
                   {r1.norm(), r2.norm()},
                   sys.conformal_volume(r.x),
                   problem.alpha,
                   r.iterations,
                   std::move(r.history)};
  const double worst = std::max(r1.norm(), r2.norm());
  if (!(worst <= problem.tolerance))
    throw ConvergenceFailure(
        "gravitating vortex residual above tolerance after gauge removal",
        worst, out.iterations, out.history);
  return out;
}

ScalarField unreduced_residual(const GravSolution& solution,
                               const GravProblem& problem) {
  const SurfaceGrid& g = problem.grid;
  const SpectralBasis& b = g.basis();
  const Eigen::ArrayXd& ev = b.laplacian_eigenvalues();
  const Eigen::VectorXd cu = solution.u.coefficients();
  const Eigen::ArrayXd u = b.synthesize(cu, Level::Fine);
  const Eigen::ArrayXd psi =
      (2.0 * b.synthesize(solution.f.coefficients(), Level::Fine)).exp() *
      problem.section.samples(Level::Fine);
  const Eigen::ArrayXd lap_u =
      b.synthesize(Eigen::VectorXd(ev * cu.array()), Level::Fine);
  const Eigen::ArrayXd lap_psi = b.synthesize(
      Eigen::VectorXd(ev * b.analyze(psi, Level::Fine).array()), Level::Fine);
  const Eigen::ArrayXd em2u = (-2.0 * u).exp();
  const Eigen::ArrayXd expr =
      em2u * (g.background_scalar_curvature() + lap_u) +
      problem.alpha * (em2u * lap_psi + problem.tau * (psi - problem.tau)) -
      problem.c();
  return ScalarField(g, b.synthesize(b.analyze(expr, Level::Fine), Level::Base));
}

}  // namespace gv

#include "gv/reduction.hpp"

#include <cmath>
#include <numbers>

#include "gv/errors.hpp"

namespace gv {

using std::numbers::pi;

double compute_lambda(int degree, double tau, double volume) {
  return pi * degree / volume + 0.25 * tau;
}

ReductionInput ReductionInput::from(const GravSolution& s, const GravProblem& p) {
  return {p.grid, p.section, p.tau, s.alpha, s.u, s.f};
}

ReductionInput ReductionInput::from(const EBSolution& s, const EBProblem& p) {
  return {p.grid, p.section, p.tau, p.alpha(), s.u, s.f};
}

double ReducedKYMData::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

std::string residual_name(int slot) {
  switch (slot) {
    case 0: return "hermitian_h1";
    case 1: return "hermitian_h2";
    case 2: return "extension_holomorphic";
    case 3: return "extension_antiholomorphic";
    case 4: return "scalar_curvature";
  }
  return "unknown";
}

namespace {

// Fine-grid samples shared by the checks.
struct Evaluation {
  Eigen::ArrayXd u, f, e2u, psi, rho, lap_u, lap_f, lap_psi;
  const SpectralBasis* basis = nullptr;
  const Eigen::ArrayXd* weights = nullptr;
  Eigen::VectorXd cf;
};

Eigen::ArrayXd fine_laplacian(const SpectralBasis& b, const Eigen::VectorXd& c) {
  return b.synthesize(Eigen::VectorXd(b.laplacian_eigenvalues() * c.array()),
                      Level::Fine);
}

Evaluation evaluate(const ReductionInput& in) {
  if (!(in.u.grid() == in.grid) || !(in.f.grid() == in.grid) ||
      !(in.section.grid() == in.grid))
    throw GridMismatch("reduction input mixes grids");
  Evaluation e;
  const SpectralBasis& b = in.grid.basis();
  e.basis = &b;
  e.weights = &in.grid.weights(Level::Fine);
  const Eigen::VectorXd cu = in.u.coefficients();
  e.cf = in.f.coefficients();
  e.u = b.synthesize(cu, Level::Fine);
  e.f = b.synthesize(e.cf, Level::Fine);
  e.e2u = (2.0 * e.u).exp();
  e.rho = in.section.samples(Level::Fine);
  e.psi = (2.0 * e.f).exp() * e.rho;
  e.lap_u = fine_laplacian(b, cu);
  e.lap_f = fine_laplacian(b, e.cf);
  e.lap_psi = fine_laplacian(b, b.analyze(e.psi, Level::Fine));
  return e;
}

double conformal_l2(const Evaluation& e, const Eigen::ArrayXd& r) {
  return std::sqrt((r.square() * e.e2u * *e.weights).sum());
}

}  // namespace

double solvability_defect(const ReductionInput& in, double lambda) {
  const Evaluation e = evaluate(in);
  return (e.e2u * (2.0 * lambda + 0.5 * e.psi - in.tau) * *e.weights).sum();
}

ReducedKYMData assemble_and_check(const ReductionInput& in,
                                  double solvability_tolerance) {
  const Evaluation e = evaluate(in);
  const SpectralBasis& b = *e.basis;
  const Eigen::ArrayXd& w = *e.weights;
  const int n = in.section.degree();
  const double vol = in.grid.volume();

  ReducedKYMData out{0.0, ScalarField::constant(in.grid, 0.0)};
  out.conformal_volume = (e.e2u * w).sum();
  out.lambda = compute_lambda(n, in.tau, out.conformal_volume);

  // Delta' f2 = 2 lambda + |phi|'^2/2 - tau, i.e. Delta f2 = exp(2u)(...).
  const Eigen::ArrayXd rhs = e.e2u * (2.0 * out.lambda + 0.5 * e.psi - in.tau);
  out.solvability_defect = (rhs * w).sum();
  const double scale = std::sqrt((rhs.square() * w).sum()) * std::sqrt(vol);
  if (std::abs(out.solvability_defect) >
      solvability_tolerance * std::max(1.0, scale))
    throw InconsistentInput(
        "second hermitian equation is not solvable: input is not a "
        "converged gravitating vortex");
  Eigen::VectorXd c2 = b.analyze(rhs, Level::Fine);
  const Eigen::ArrayXd& ev = b.laplacian_eigenvalues();
  c2[SpectralBasis::constant_mode] = 0.0;
  for (Eigen::Index i = 1; i < c2.size(); ++i) c2[i] /= ev[i];
  out.f2 = ScalarField::from_coefficients(in.grid, c2);
  const Eigen::ArrayXd lap_f2 = fine_laplacian(b, c2);

  const Eigen::ArrayXd em2u = (-2.0 * e.u).exp();
  const double flux = 2.0 * pi * n / vol;
  // i Lambda' F_{h'} = exp(-2u)(i Lambda F_{h0} + Delta f), i Lambda F_{h0} = 2 pi N / Vol
  const Eigen::ArrayXd curv_h = em2u * (flux + e.lap_f);
  // i Lambda' F_{h2} = Delta' f2 / 2
  const Eigen::ArrayXd curv_h2 = 0.5 * em2u * lap_f2;
  const Eigen::ArrayXd r_h1 = curv_h + curv_h2 + 0.25 * e.psi - out.lambda;
  const Eigen::ArrayXd r_h2 = curv_h2 - 0.25 * e.psi + 0.5 * in.tau - out.lambda;

  const double s0 = in.grid.background_scalar_curvature();
  const double c = compute_c(in.alpha, in.tau, n, in.grid.euler_characteristic(), vol);
  const Eigen::ArrayXd s_prime = em2u * (s0 + e.lap_u);
  const Eigen::ArrayXd lap_psi_prime = em2u * e.lap_psi;
  const Eigen::ArrayXd r_scalar =
      s_prime + in.alpha * (lap_psi_prime + 2.0 * in.tau * curv_h2) - c;
  const Eigen::ArrayXd r_curvature =
      s_prime + in.alpha * (lap_psi_prime + in.tau * (e.psi - in.tau)) - c;

  out.residuals = {conformal_l2(e, r_h1), conformal_l2(e, r_h2), 0.0, 0.0,
                   conformal_l2(e, r_scalar)};
  out.curvature_equation_residual = conformal_l2(e, r_curvature);
  return out;
}

double identity_probe(const ReductionInput& in, const ReducedKYMData& data) {
  const Evaluation e = evaluate(in);
  const SpectralBasis& b = *e.basis;
  const int n = in.section.degree();
  const double vol = in.grid.volume();
  const Eigen::ArrayXd em2u = (-2.0 * e.u).exp();

  const Eigen::VectorXd c2 = data.f2.coefficients();
  const Eigen::ArrayXd lap_f2 = fine_laplacian(b, c2);
  const Eigen::ArrayXd lhs = -em2u * e.lap_psi - in.tau * em2u * lap_f2;

  // |grad psi|^2 / psi = exp(2f)(4 rho |grad f|^2 + 4 <grad f, grad rho>
  //                               + |grad rho|^2 / rho)
  auto lap_of = [&](const Eigen::ArrayXd& g) {
    return fine_laplacian(b, b.analyze(g, Level::Fine));
  };
  const Eigen::ArrayXd grad_f2 = e.f * e.lap_f - 0.5 * lap_of(e.f.square());
  const Eigen::ArrayXd lap_rho = lap_of(e.rho);
  const Eigen::ArrayXd grad_f_rho =
      0.5 * (e.f * lap_rho + e.rho * e.lap_f - lap_of(e.f * e.rho));
  const Eigen::ArrayXd energy =
      (2.0 * e.f).exp() * (4.0 * e.rho * grad_f2 + 4.0 * grad_f_rho +
                           in.section.gradient_energy(Level::Fine));
  const Eigen::ArrayXd curv_h = em2u * (2.0 * pi * n / vol + e.lap_f);
  const Eigen::ArrayXd weitzenboeck = 2.0 * e.psi * curv_h - em2u * energy;
  const Eigen::ArrayXd rhs =
      -weitzenboeck - in.tau * (2.0 * data.lambda + 0.5 * e.psi - in.tau);
  return conformal_l2(e, lhs - rhs);
}

}  // namespace gv

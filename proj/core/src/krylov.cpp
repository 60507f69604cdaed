#include "gv/krylov.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace gv {

KrylovResult conjugate_gradient(const LinearOperator& apply,
                                const Eigen::VectorXd& rhs,
                                const LinearOperator& preconditioner,
                                double rtol, int max_iterations) {
  KrylovResult out;
  out.x = Eigen::VectorXd::Zero(rhs.size());
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = preconditioner(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::VectorXd ap = apply(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;
    const double a = rz / pap;
    out.x += a * p;
    r -= a * ap;
    out.iterations = it;
    out.relative_residual = r.norm() / bnorm;
    if (out.relative_residual <= rtol) {
      out.converged = true;
      return out;
    }
    z = preconditioner(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  out.relative_residual = (rhs - apply(out.x)).norm() / bnorm;
  out.converged = out.relative_residual <= rtol;
  return out;
}

KrylovResult gmres(const LinearOperator& apply, const Eigen::VectorXd& rhs,
                   const LinearOperator& preconditioner, double rtol,
                   int restart, int max_iterations) {
  const Eigen::Index n = rhs.size();
  KrylovResult out;
  out.x = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  restart = std::max(1, std::min<int>(restart, int(n)));
  Eigen::MatrixXd v(n, restart + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(restart + 1, restart);
  std::vector<double> cs(restart), sn(restart);
  Eigen::VectorXd g(restart + 1);

  int total = 0;
  Eigen::VectorXd r = rhs;
  double beta = bnorm;
  while (total < max_iterations) {
    v.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    h.setZero();
    int k = 0;
    for (; k < restart && total < max_iterations; ++k, ++total) {
      Eigen::VectorXd w = apply(preconditioner(v.col(k)));
      for (int i = 0; i <= k; ++i) {
        h(i, k) = w.dot(v.col(i));
        w -= h(i, k) * v.col(i);
      }
      // one reorthogonalization pass keeps the basis usable near breakdown
      for (int i = 0; i <= k; ++i) {
        const double c = w.dot(v.col(i));
        h(i, k) += c;
        w -= c * v.col(i);
      }
      h(k + 1, k) = w.norm();
      if (h(k + 1, k) > 0.0) v.col(k + 1) = w / h(k + 1, k);
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const double denom = std::hypot(h(k, k), h(k + 1, k));
      cs[k] = denom == 0.0 ? 1.0 : h(k, k) / denom;
      sn[k] = denom == 0.0 ? 0.0 : h(k + 1, k) / denom;
      h(k, k) = denom;
      h(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) <= rtol * bnorm || h(k, k) == 0.0) {
        ++k;
        ++total;
        break;
      }
    }
    if (k > 0) {
      Eigen::VectorXd y = h.topLeftCorner(k, k)
                              .triangularView<Eigen::Upper>()
                              .solve(g.head(k));
      out.x += preconditioner(v.leftCols(k) * y);
    }
    r = rhs - apply(out.x);
    beta = r.norm();
    out.iterations = total;
    out.relative_residual = beta / bnorm;
    if (out.relative_residual <= rtol) {
      out.converged = true;
      break;
    }
    if (!std::isfinite(beta)) break;
  }
  return out;
}

}  // namespace gv

#include "gv/theta.hpp"

#include <cmath>
#include <numbers>

namespace gv {

namespace {
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// q^{(n+1/2)^2} computed as exp(i pi modulus (n+1/2)^2) to avoid overflow of
// powers; terms are summed until negligible.
template <class Term>
cd theta_series(cd modulus, Term term) {
  cd sum = 0.0;
  double scale = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double h = n + 0.5;
    const cd qn = std::exp(cd(0.0, kPi) * modulus * (h * h));
    const cd t = term(n, qn);
    sum += t;
    scale += std::abs(t);
    if (std::abs(t) <= 1e-18 * scale && n > 2) break;
  }
  return sum;
}
}  // namespace

cd jacobi_theta1(cd x, cd modulus) {
  return 2.0 * theta_series(modulus, [&](int n, cd qn) {
           const double sign = (n % 2 == 0) ? 1.0 : -1.0;
           return sign * qn * std::sin(double(2 * n + 1) * x);
         });
}

cd jacobi_theta1_prime(cd x, cd modulus) {
  return 2.0 * theta_series(modulus, [&](int n, cd qn) {
           const double sign = (n % 2 == 0) ? 1.0 : -1.0;
           const double k = 2 * n + 1;
           return sign * qn * k * std::cos(k * x);
         });
}

}  // namespace gv

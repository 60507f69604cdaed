#pragma once

#include <complex>

namespace gv {

/// Jacobi theta function theta_1(x | modulus) with nome exp(i pi modulus).
std::complex<double> jacobi_theta1(std::complex<double> x,
                                   std::complex<double> modulus);

/// Derivative of theta_1 with respect to x.
std::complex<double> jacobi_theta1_prime(std::complex<double> x,
                                         std::complex<double> modulus);

}  // namespace gv

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, solver or run parameters.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A field was combined with a grid it does not belong to.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Right-hand side of a Poisson problem with non-negligible mean.
class SolvabilityError : public Error {
 public:
  SolvabilityError(const std::string& what, double mean);
  double mean() const noexcept { return mean_; }

 private:
  double mean_;
};

class InvalidDivisor : public Error {
 public:
  using Error::Error;
};

/// A section could not be built to the required accuracy.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// An existence gate proves there is no solution (e.g. the strict
/// inequality 4 pi N < tau Vol fails).
class NoSolutionExists : public Error {
 public:
  NoSolutionExists(const std::string& what, double lhs, double rhs);
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  double lhs_;
  double rhs_;
};

/// Newton iteration stagnated or ran out of iterations.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual, int iterations,
                     std::vector<double> history);
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  double residual_;
  int iterations_;
  std::vector<double> history_;
};

/// The linearization has a (numerical) kernel. Carries the near-kernel
/// direction in spectral coefficients, one block per unknown field.
class SingularJacobian : public Error {
 public:
  SingularJacobian(const std::string& what, double sigma,
                   std::vector<Eigen::VectorXd> near_kernel);
  double smallest_singular_value() const noexcept { return sigma_; }
  const std::vector<Eigen::VectorXd>& near_kernel() const noexcept {
    return near_kernel_;
  }

 private:
  double sigma_;
  std::vector<Eigen::VectorXd> near_kernel_;
};

/// Post-processing input that is not a converged solution.
class InconsistentInput : public Error {
 public:
  using Error::Error;
};

}  // namespace gv

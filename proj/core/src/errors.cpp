#include "gv/errors.hpp"

#include <utility>

namespace gv {

SolvabilityError::SolvabilityError(const std::string& what, double mean)
    : Error(what), mean_(mean) {}

NoSolutionExists::NoSolutionExists(const std::string& what, double lhs,
                                   double rhs)
    : Error(what), lhs_(lhs), rhs_(rhs) {}

ConvergenceFailure::ConvergenceFailure(const std::string& what,
                                       double residual, int iterations,
                                       std::vector<double> history)
    : Error(what),
      residual_(residual),
      iterations_(iterations),
      history_(std::move(history)) {}

SingularJacobian::SingularJacobian(const std::string& what, double sigma,
                                   std::vector<Eigen::VectorXd> near_kernel)
    : Error(what), sigma_(sigma), near_kernel_(std::move(near_kernel)) {}

}  // namespace gv

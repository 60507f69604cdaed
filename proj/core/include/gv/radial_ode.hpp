#pragma once

#include <optional>
#include <vector>

namespace gv {

/// S^1-invariant solution of the Einstein-Bogomol'nyi single equation for
/// the divisor (N/2){0} + (N/2){inf}, written in s = log|z| where the
/// normalized density is sech(s)^N. The profile is even in s.
struct RadialProfile {
  std::vector<double> s;
  std::vector<double> f;
  double f_center = 0.0;
  double f_far = 0.0;
  double end_slope = 0.0;
  double c_prime = 0.0;
  double volume = 0.0;
  double horizon = 0.0;
  int shooting_iterations = 0;
};

struct RadialOracleOptions {
  double horizon = 20.0;
  double tolerance = 1e-12;
  /// Fixed c'; when unset c' is found from the volume condition.
  std::optional<double> c_prime;
  double target_volume = 6.283185307179586;
};

/// Shoots from s = 0 (where f' = 0 by evenness) to the pole horizon,
/// adjusting f(0), and c' unless fixed, until f'(horizon) = 0 and the
/// conformal area matches the target. Samples f at `samples`.
RadialProfile radial_ode_oracle(int degree, double tau, double alpha,
                                double volume,
                                const std::vector<double>& samples,
                                const RadialOracleOptions& options = {});

}  // namespace gv

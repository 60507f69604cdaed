#pragma once

#include <complex>
#include <vector>

namespace gv {

/// A point of an effective divisor. On the sphere `z` is the stereographic
/// coordinate (ignored when `at_infinity`); on the torus it is the lattice
/// coordinate a + b * modulus.
struct DivisorPoint {
  std::complex<double> z;
  int multiplicity = 1;
  bool at_infinity = false;
};

/// Effective divisor sum n_j p_j with distinct points and degree N >= 1.
class Divisor {
 public:
  explicit Divisor(std::vector<DivisorPoint> points);

  const std::vector<DivisorPoint>& points() const { return points_; }
  int degree() const { return degree_; }
  int max_multiplicity() const;

 private:
  std::vector<DivisorPoint> points_;
  int degree_ = 0;
};

/// Chordal distance squared on the unit-diameter Riemann sphere.
double chordal_distance2(const DivisorPoint& a, std::complex<double> z);

}  // namespace gv

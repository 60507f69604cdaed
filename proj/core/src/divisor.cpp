#include "gv/divisor.hpp"

#include <algorithm>
#include <cmath>

#include "gv/errors.hpp"

namespace gv {

double chordal_distance2(const DivisorPoint& a, std::complex<double> z) {
  const double nz = std::norm(z);
  if (a.at_infinity) return 1.0 / (1.0 + nz);
  return std::norm(z - a.z) / ((1.0 + nz) * (1.0 + std::norm(a.z)));
}

Divisor::Divisor(std::vector<DivisorPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidDivisor("divisor has no points");
  int infinities = 0;
  for (const DivisorPoint& p : points_) {
    if (p.multiplicity < 1)
      throw InvalidDivisor("multiplicities must be positive integers");
    if (!p.at_infinity && !(std::isfinite(p.z.real()) && std::isfinite(p.z.imag())))
      throw InvalidDivisor("divisor point is not finite");
    infinities += p.at_infinity ? 1 : 0;
    degree_ += p.multiplicity;
  }
  if (infinities > 1) throw InvalidDivisor("point at infinity repeated");
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const DivisorPoint& a = points_[i];
      const DivisorPoint& b = points_[j];
      if (a.at_infinity || b.at_infinity) continue;
      if (std::abs(a.z - b.z) <= 1e-12 * (1.0 + std::abs(a.z)))
        throw InvalidDivisor("divisor points collide");
    }
}

int Divisor::max_multiplicity() const {
  int m = 0;
  for (const DivisorPoint& p : points_) m = std::max(m, p.multiplicity);
  return m;
}

}  // namespace gv

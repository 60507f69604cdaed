#pragma once

#include <string>

#include "gv/divisor.hpp"

namespace gv {

enum class StabilityClass {
  Stable,
  StrictlyPolystable,
  SemistableNotPolystable,
  Unstable,
};

std::string to_string(StabilityClass c);

/// Classification together with the point whose multiplicity decides it
/// (index into divisor.points(), -1 when every multiplicity is below N/2).
struct Stability {
  StabilityClass cls = StabilityClass::Stable;
  int witness_point = -1;
  int witness_multiplicity = 0;
};

/// Stability of the SL(2)-orbit of a binary form of degree N with the
/// given divisor of zeros, read off from the multiplicities.
Stability git_classify(const Divisor& divisor);

struct ClosedOrbit {
  bool closed = false;
  /// True when the divisor is (N/2){0} + (N/2){inf}, i.e. the form is
  /// itself fixed by the C* action; reported as closed by convention.
  bool fixed_point = false;
};

/// Whether the orbit of the form under diag(t, 1/t) (fixing 0 and inf)
/// is closed.
ClosedOrbit closed_cstar_orbit(const Divisor& divisor);

/// Independent classification via the Hilbert-Mumford criterion: every
/// one-parameter subgroup is conjugate to one fixing a pair of points,
/// which are moved to 0 and inf; the weights of the monomials of the
/// expanded form then decide the class. Refuses N > 8.
StabilityClass hilbert_mumford_oracle(const Divisor& divisor);

}  // namespace gv

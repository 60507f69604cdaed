#include "gv/git.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gv/errors.hpp"

namespace gv {

std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "Stable";
    case StabilityClass::StrictlyPolystable: return "StrictlyPolystable";
    case StabilityClass::SemistableNotPolystable:
      return "SemistableNotPolystable";
    case StabilityClass::Unstable: return "Unstable";
  }
  return "Unknown";
}

Stability git_classify(const Divisor& divisor) {
  const auto& pts = divisor.points();
  const int n = divisor.degree();
  Stability out;
  int half_count = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const int m = pts[j].multiplicity;
    if (2 * m > n) {
      return {StabilityClass::Unstable, int(j), m};
    }
    if (2 * m == n) {
      ++half_count;
      if (out.witness_point < 0) {
        out.witness_point = int(j);
        out.witness_multiplicity = m;
      }
    }
  }
  if (half_count == 2)
    out.cls = StabilityClass::StrictlyPolystable;
  else if (half_count == 1)
    out.cls = StabilityClass::SemistableNotPolystable;
  else
    out.cls = StabilityClass::Stable;
  return out;
}

ClosedOrbit closed_cstar_orbit(const Divisor& divisor) {
  const int n = divisor.degree();
  int at_zero = 0;
  int at_inf = 0;
  for (const DivisorPoint& p : divisor.points()) {
    if (p.at_infinity)
      at_inf = p.multiplicity;
    else if (p.z == std::complex<double>(0.0, 0.0))
      at_zero = p.multiplicity;
  }
  ClosedOrbit out;
  if (2 * at_zero == n && 2 * at_inf == n) {
    out.closed = true;
    out.fixed_point = true;
    return out;
  }
  out.closed = 2 * at_zero < n && 2 * at_inf < n;
  return out;
}

namespace {

using cd = std::complex<double>;

struct Point {
  cd z;
  bool inf = false;
};

// Image of p under z -> (z - a) / (z - b).
Point mobius(const Point& p, const Point& a, const Point& b) {
  if (p.inf) {
    if (a.inf) return {0.0, false};
    if (b.inf) return {0.0, true};
    return {1.0, false};
  }
  if (b.inf) return {p.z - a.z, false};
  const cd den = p.z - b.z;
  if (std::abs(den) == 0.0) return {0.0, true};
  if (a.inf) return {1.0 / den, false};
  return {(p.z - a.z) / den, false};
}

// Exponents k of the monomials x^k y^{N-k} (x = z) present in the form
// whose zeros are `roots`.
std::vector<int> present_monomials(const std::vector<Point>& roots,
                                   const std::vector<int>& mult) {
  std::vector<cd> poly{1.0};
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (roots[j].inf) continue;
    for (int r = 0; r < mult[j]; ++r) {
      std::vector<cd> next(poly.size() + 1, 0.0);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        next[k + 1] += poly[k];
        next[k] -= roots[j].z * poly[k];
      }
      poly = std::move(next);
    }
  }
  double scale = 0.0;
  for (const cd& c : poly) scale = std::max(scale, std::abs(c));
  std::vector<int> ks;
  for (std::size_t k = 0; k < poly.size(); ++k)
    if (std::abs(poly[k]) > 1e-9 * scale) ks.push_back(int(k));
  return ks;
}

}  // namespace

StabilityClass hilbert_mumford_oracle(const Divisor& divisor) {
  const int n = divisor.degree();
  if (n > 8) throw ConfigurationError("Hilbert-Mumford oracle limited to N <= 8");

  std::vector<Point> roots;
  std::vector<int> mult;
  for (const DivisorPoint& p : divisor.points()) {
    roots.push_back({p.z, p.at_infinity});
    mult.push_back(p.multiplicity);
  }
  // Candidate fixed points: the divisor points and two auxiliary points
  // that avoid them.
  std::vector<Point> candidates = roots;
  for (cd extra : {cd(0.3717, 1.2913), cd(-2.0531, 0.4479), cd(0.8123, -3.1)}) {
    bool clash = false;
    for (const Point& r : roots)
      if (!r.inf && std::abs(r.z - extra) < 1e-6) clash = true;
    if (!clash) candidates.push_back({extra, false});
  }

  bool semistable_boundary = false;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (i == j) continue;
      std::vector<Point> moved;
      for (const Point& r : roots)
        moved.push_back(mobius(r, candidates[i], candidates[j]));
      // Multiplicity at infinity lowers the polynomial degree; the weight of
      // x^k y^{N-k} under diag(t, 1/t) is 2k - N.
      const std::vector<int> ks = present_monomials(moved, mult);
      int wmin = n, wmax = -n;
      for (int k : ks) {
        wmin = std::min(wmin, 2 * k - n);
        wmax = std::max(wmax, 2 * k - n);
      }
      if (wmin > 0 || wmax < 0) return StabilityClass::Unstable;
      if (wmin == 0 && wmax == 0) return StabilityClass::StrictlyPolystable;
      if (wmin == 0 || wmax == 0) semistable_boundary = true;
    }
  return semistable_boundary ? StabilityClass::SemistableNotPolystable
                             : StabilityClass::Stable;
}

}  // namespace gv

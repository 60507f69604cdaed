#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "gv/einstein_bogomolnyi.hpp"
#include "gv/errors.hpp"
#include "gv/git.hpp"

using namespace gv;
using oracle::cd;

namespace {

Divisor with_multiplicities(const std::vector<int>& mult, std::mt19937_64& rng) {
  const Divisor simple = oracle::random_divisor(rng, int(mult.size()), 0, {0, 1}, 0.2);
  std::vector<DivisorPoint> pts = simple.points();
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k].multiplicity = mult[k];
  return Divisor(pts);
}

// Closedness of the diag(t, 1/t) orbit from the exponents of the expanded
// form: monomial z^k carries weight 2k - N, and the orbit is closed iff
// the weights straddle zero or all vanish.
bool closed_by_weights(const Divisor& d) {
  std::vector<cd> poly{1.0};
  for (const DivisorPoint& p : d.points())
    for (int m = 0; m < p.multiplicity; ++m) {
      std::vector<cd> next(poly.size() + 1, 0.0);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        if (p.at_infinity) {
          next[k] += poly[k];  // homogeneous factor w
        } else {
          next[k + 1] += poly[k];
          next[k] -= p.z * poly[k];
        }
      }
      poly = next;
    }
  const int n = d.degree();
  int lo = n + 1, hi = -n - 1;
  for (std::size_t k = 0; k < poly.size(); ++k)
    if (std::abs(poly[k]) > 1e-12) {
      lo = std::min(lo, 2 * int(k) - n);
      hi = std::max(hi, 2 * int(k) - n);
    }
  return (lo < 0 && hi > 0) || (lo == 0 && hi == 0);
}

}  // namespace

TEST_CASE("worked classes") {
  std::mt19937_64 rng(2);
  CHECK(git_classify(with_multiplicities({2, 2}, rng)).cls == StabilityClass::StrictlyPolystable);
  CHECK(git_classify(with_multiplicities({3, 1}, rng)).cls == StabilityClass::Unstable);
  CHECK(git_classify(with_multiplicities({1, 1, 1, 1}, rng)).cls == StabilityClass::Stable);
  CHECK(git_classify(with_multiplicities({2, 1, 1}, rng)).cls == StabilityClass::SemistableNotPolystable);
  CHECK(git_classify(with_multiplicities({1, 1}, rng)).cls == StabilityClass::StrictlyPolystable);
  // a double point of a binary quadratic is a null form
  CHECK(git_classify(with_multiplicities({2}, rng)).cls == StabilityClass::Unstable);
  CHECK(hilbert_mumford_oracle(with_multiplicities({2}, rng)) == StabilityClass::Unstable);

  const Stability s = git_classify(Divisor({{{1, 0}, 1, false}, {{0, 0}, 3, false}}));
  CHECK(s.witness_point == 1);
  CHECK(s.witness_multiplicity == 3);
}

TEST_CASE("multiplicity rule agrees with the hilbert-mumford oracle") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 6; ++n)
    for (const auto& mult : oracle::partitions(n))
      for (int trial = 0; trial < 8; ++trial) {
        Divisor d = with_multiplicities(mult, rng);
        if (trial % 2 == 0) {
          // move one point to infinity
          std::vector<DivisorPoint> pts = d.points();
          pts[trial / 2 % pts.size()] = {{}, pts[trial / 2 % pts.size()].multiplicity, true};
          d = Divisor(pts);
        }
        CHECK(git_classify(d).cls == hilbert_mumford_oracle(d));
      }
  // placements including infinity
  const Divisor d({{{}, 2, true}, {{0.5, 0.5}, 1, false}, {{-2, 0.1}, 1, false}});
  CHECK(hilbert_mumford_oracle(d) == StabilityClass::SemistableNotPolystable);
}

TEST_CASE("hilbert-mumford oracle refuses large degree") {
  std::mt19937_64 rng(4);
  CHECK_THROWS_AS(hilbert_mumford_oracle(with_multiplicities({3, 3, 3}, rng)), ConfigurationError);
  CHECK_NOTHROW(git_classify(with_multiplicities({3, 3, 3}, rng)));
}

TEST_CASE("closed C* orbits") {
  const DivisorPoint zero{{0, 0}, 1, false}, inf{{}, 1, true}, one{{1, 0}, 1, false};
  auto with = [](DivisorPoint p, int m) {
    p.multiplicity = m;
    return p;
  };
  const ClosedOrbit fixed = closed_cstar_orbit(Divisor({with(zero, 2), with(inf, 2)}));
  CHECK(fixed.closed);
  CHECK(fixed.fixed_point);
  CHECK_FALSE(closed_cstar_orbit(Divisor({with(zero, 3), with(one, 1)})).closed);
  CHECK(closed_cstar_orbit(Divisor({zero, inf, with(one, 2)})).closed);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> m(0, 3);
    std::vector<DivisorPoint> pts;
    const int a = m(rng), b = m(rng);
    if (a) pts.push_back(with(zero, a));
    if (b) pts.push_back(with(inf, b));
    const Divisor extra = oracle::random_divisor(rng, 1 + m(rng), 0);
    for (DivisorPoint p : extra.points())
      if (std::abs(p.z) > 0.05 && std::abs(p.z) < 20.0) pts.push_back(p);
    if (pts.empty()) continue;
    const Divisor d(pts);
    CHECK(closed_cstar_orbit(d).closed == closed_by_weights(d));
  }
}

TEST_CASE("yang cases are consistent with stability") {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 6; ++n)
    for (const auto& mult : oracle::partitions(n)) {
      const Divisor d = with_multiplicities(mult, rng);
      const YangCase y = yang_hypothesis_check(d);
      const StabilityClass c = git_classify(d).cls;
      if (y == YangCase::Symmetric) CHECK(c == StabilityClass::StrictlyPolystable);
      if (y == YangCase::Stable) CHECK(c == StabilityClass::Stable);
      if (c == StabilityClass::Stable) CHECK(y == YangCase::Stable);
    }
}

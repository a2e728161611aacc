#pragma once

#include <vector>

#include "mulcov/factored.hpp"

namespace mulcov {

// Named choice of m-th roots: coordinate i is |b_i|^(1/m), the positive real
// root, times zeta_{2m}^(twist_i + s_i) with s_i = 1 for negative b_i.  So
// twist 0 names the positive real root of a positive base and the root of
// argument pi/m of a negative one.  Twists are stored mod 2m; the m-th power
// of a coordinate reproduces its base exactly iff its twist is even.
struct RadicalTuple {
  std::vector<FactoredRational> bases;
  long denominator = 1;
  std::vector<long> twists;

  bool operator==(const RadicalTuple& o) const = default;
};

// Twist-0 choice for every coordinate.
inline RadicalTuple canonical_roots(std::vector<FactoredRational> bases,
                                    long m) {
  RadicalTuple r;
  r.twists.assign(bases.size(), 0);
  r.bases = std::move(bases);
  r.denominator = m;
  return r;
}

// Absolute phase exponent of coordinate i: the root is
// |b_i|^(1/m) * zeta_{2m}^(phase).
inline long radical_phase(const RadicalTuple& r, size_t i) {
  long two_m = 2 * r.denominator;
  long s = r.bases[i].sign < 0 ? 1 : 0;
  return ((r.twists[i] + s) % two_m + two_m) % two_m;
}

}  // namespace mulcov

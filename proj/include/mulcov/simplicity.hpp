#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mulcov/factored.hpp"
#include "mulcov/radical.hpp"
#include "mulcov/scalar.hpp"

namespace mulcov {

// Explicit purity violation: solution^n == b exactly, b is the product of
// the tuple entries raised to `combination`, and no group element solves
// x^n == b.
struct PurityWitness {
  IntVec combination;
  FactoredRational b;
  Int n;
  FactoredRational solution;
};

struct SimplicityCertificate {
  std::vector<FactoredRational> tuple;
  bool verdict = false;
  bool independent = false;
  std::vector<Int> smith;
  std::optional<PurityWitness> witness;
};

// Spanned by square roots of the saturation basis, all inside Q(zeta_M).
struct PureHullBasis {
  std::vector<FactoredRational> base_tuple;
  std::vector<RadicalTuple> half_basis;
  long conductor = 1;
  Int index = 1;
};

// a is k-simple when a is not torsion and no divisor > 1 of k divides the
// gcd of a's prime exponents.
bool is_k_simple(const FactoredRational& a, const Int& k);

// Verdict: multiplicatively independent with saturated exponent lattice.
SimplicityCertificate is_simple_tuple(const std::vector<FactoredRational>& t);

// The root order N stabilizing a simple rational a, with the conductor of
// the resulting radical.  Over Q the order is always 2.  Throws NotSimple.
std::pair<long, long> stabilizer_N(const FactoredRational& a);

// Throws NotIndependent.
PureHullBasis pure_hull(const std::vector<FactoredRational>& t);

}  // namespace mulcov

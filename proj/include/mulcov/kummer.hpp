#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mulcov/cyclotomic.hpp"
#include "mulcov/radical.hpp"
#include "mulcov/simplicity.hpp"

namespace mulcov {

// Radicals already adjoined to the base field Q(zeta_conductor).
struct ConjugacyContext {
  long conductor = 1;
  std::vector<RadicalTuple> fixed;
};

struct ConjugacyDecision {
  bool verdict = false;
  // on true: the zeta action of a conjugating automorphism together with the
  // per-coordinate root shifts x_i -> zeta_n^(shifts[i]) x_i
  std::optional<GaloisMap> witness;
  std::vector<long> shifts;
  // on false: exponents of a base-field-valued monomial in the coordinates
  // whose phases disagree between the two tuples
  std::optional<std::vector<long>> obstruction;
};

// Is the tuple simple as a subgroup of Q(zeta_M)^x: simple over Q and no
// nonempty subproduct becomes a square in the cyclotomic field.
bool is_simple_in_context(const std::vector<FactoredRational>& t, long M);

// Degree of Q(zeta_M)(n-th roots of t) over Q(zeta_M), computed by counting
// Galois images of a fixed root choice.  Throws NotSimpleInContext,
// ConductorIncompatible.
Int kummer_degree(const std::vector<FactoredRational>& t, long n, long M);

// Does some automorphism over Q(zeta_M)(fixed radicals) map r1 to r2
// coordinate-wise?  Throws ShapeMismatch.
ConjugacyDecision roots_conjugate(const RadicalTuple& r1,
                                  const RadicalTuple& r2,
                                  const ConjugacyContext& ctx);

// The denominator stabilizing all further root choices of b: twice the
// exponent of saturation(<b>)/<b>.  Throws NotIndependent.
std::pair<long, PureHullBasis> stabilizing_m(
    const std::vector<FactoredRational>& b);

// With the m-th roots choice_m fixed, is choice_dm conjugate to the
// canonical dm-th extension of choice_m?  Throws NotACompatibleRoot.
bool extension_consistent(const std::vector<FactoredRational>& b, long m,
                          long d, const RadicalTuple& choice_m,
                          const RadicalTuple& choice_dm);

// Exact value of the twist-th den-th root of b for den in {1, 2}, as an
// element of a cyclotomic field (returned with its index).
std::pair<long, CyclotomicElement> radical_value(const FactoredRational& b,
                                                 long den, long twist);

}  // namespace mulcov

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mulcov/factored.hpp"
#include "mulcov/kummer.hpp"

namespace mulcov {

// Element of the multiplicative value fragment: a positive real radical
// held as rational prime exponents, a root of unity e(zeta), and a formal
// monomial in transcendental symbols.  The three factors are
// multiplicatively independent, so equality is componentwise.
struct CoverValue {
  std::map<Int, Rat> radicand;         // prime -> exponent, nonzero
  Rat zeta = Rat(0);                   // e(zeta), reduced into [0, 1)
  std::map<std::string, Rat> symbols;  // symbol -> exponent, nonzero

  bool operator==(const CoverValue& o) const = default;
  bool is_transcendental() const { return !symbols.empty(); }
  bool is_torsion() const { return radicand.empty() && symbols.empty(); }
};

CoverValue cv_one();
CoverValue cv_rational(const FactoredRational& q);
CoverValue cv_root_of_unity(const Rat& q);  // e(q)
CoverValue cv_symbol(const std::string& name);
CoverValue cv_mul(const CoverValue& a, const CoverValue& b);
CoverValue cv_inv(const CoverValue& a);
// Integer powers are exact; fractional powers take the canonical branch
// (all exponents and the phase divided).
CoverValue cv_pow(const CoverValue& a, const Rat& e);

// Rational value back from a CoverValue with integral exponents and
// phase 0 or 1/2; nullopt-like failure raises UnsupportedValueShape.
FactoredRational cv_to_rational(const CoverValue& v);

// Element of the covering Q-vector space H as coordinates on the named
// generators.  The kernel generator is an ordinary coordinate.
using HElem = std::map<std::string, Rat>;

HElem h_unit(const std::string& name, const Rat& c = Rat(1));
HElem h_add(const HElem& a, const HElem& b);
HElem h_sub(const HElem& a, const HElem& b);
HElem h_scale(const Rat& c, const HElem& a);

// Presentation of a cover ex: H -> F*, kernel Z times the declared kernel
// element.  values fixes ex on the non-kernel generators; roots holds the
// committed d-th root choices, which are eager and immutable.  Absent
// roots are derived from the committed ones, canonical in the remaining
// freedom, and recorded on first use.
struct CoverPresentation {
  std::vector<std::string> generators;  // kernel name included
  std::string kernel;
  long kernel_scale = 1;  // declared element is scale * (primitive generator)
  std::map<std::string, CoverValue> values;
  std::map<std::pair<std::string, long>, CoverValue> roots;
  long explicit_mu = 1;        // torsion level pinned by kernel evaluations
  long denominator_bound = 1;  // largest denominator materialized so far
};

// Validates the shape and the exact-kernel condition: the generator values
// must be multiplicatively independent modulo torsion.
CoverPresentation make_presentation(std::vector<std::string> generators,
                                    std::string kernel,
                                    std::map<std::string, CoverValue> values,
                                    long kernel_scale = 1);

// Commit ex(name/d) = value.  Raises NotACompatibleRoot unless value is a
// d-th root of the level-1 value coherent with every earlier commitment.
void commit_root(CoverPresentation& p, const std::string& name, long d,
                 const CoverValue& value);

// Pin the roots of unity up to e(1/n), as evaluating kernel/n would.
void materialize_mu(CoverPresentation& p, long n);

// Torsion level of the group generated by the committed values and Q*.
long mu_order(const CoverPresentation& p);

// ex extended multiplicatively to rational combinations.  Coordinates with
// denominator above the budget raise BudgetExceeded.  Derived roots are
// recorded, so repeated calls are stable.
CoverValue eval_ex(CoverPresentation& p, const HElem& v, long budget = 64);

// h1 - h2 lies in Z times the declared kernel element.
bool relation_E(const CoverPresentation& p, const HElem& h1, const HElem& h2);

// ex(h1) + ex(h2) = ex(h3), decided exactly in a cyclotomic field.  Raises
// TranscendentalAddition when a value has a formal part and
// UnsupportedValueShape when a radical falls outside the quadratic range.
bool relation_S(CoverPresentation& p, const HElem& h1, const HElem& h2,
                const HElem& h3, long budget = 64);

struct PartialIso {
  CoverPresentation domain;
  CoverPresentation codomain;
  std::map<std::string, std::string> pairing;  // generator partners
  std::map<std::string, HElem> linear_map;     // committed images
};

// Pair up generators by value signature; kernel maps to kernel.  Raises
// SignatureMismatch when counts, kernel scales or level-1 values differ.
PartialIso begin_iso(const CoverPresentation& p1, const CoverPresentation& p2);

// Extend by one domain generator: transcendental values map freely, and an
// algebraic value maps to its partner shifted by a kernel multiple chosen
// so that the committed root systems stay conjugate.  Raises
// NoConjugateChoice when no shift works.
void backforth_extend(PartialIso& iso, const std::string& h_new,
                      long budget = 64);

// Run the back-and-forth across all generators and re-verify.
PartialIso build_isomorphism(const CoverPresentation& p1,
                             const CoverPresentation& p2, long budget = 64);

HElem apply_linear(const PartialIso& iso, const HElem& v);

// Full commuting-square check over everything materialized: kernel mapping,
// conjugacy of the committed root systems under the chosen shifts, and
// homomorphism probes.
bool verify_iso(PartialIso& iso, long budget = 64);

}  // namespace mulcov

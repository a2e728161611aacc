#pragma once

#include <map>
#include <optional>

#include "mulcov/scalar.hpp"

namespace mulcov {

// Nonzero rational as sign times a product of prime powers.
// Exponents are nonzero; an empty map with sign +1 is the rational 1.
struct FactoredRational {
  int sign = 1;
  std::map<Int, Int> exponents;

  bool operator==(const FactoredRational& o) const = default;

  bool is_one() const { return sign == 1 && exponents.empty(); }
  bool is_torsion() const { return exponents.empty(); }
};

FactoredRational factor(const Rat& q, unsigned long trial_bound = 100000);

Rat to_rational(const FactoredRational& f);

FactoredRational fr_mul(const FactoredRational& a, const FactoredRational& b);
FactoredRational fr_pow(const FactoredRational& a, const Int& e);
FactoredRational fr_inv(const FactoredRational& a);

// gcd of all prime exponents; 0 for torsion elements.
Int exponent_content(const FactoredRational& a);

// Signed squarefree kernel: sign(a) times the product of primes with odd
// exponent.  a equals kernel times a rational square.
FactoredRational squarefree_kernel(const FactoredRational& a);

bool is_squarefree(const FactoredRational& a);

// Discriminant of Q(sqrt(a)) for squarefree a: a if a = 1 mod 4, else 4a.
Int fundamental_discriminant(const FactoredRational& squarefree);

}  // namespace mulcov

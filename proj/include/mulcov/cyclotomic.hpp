#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mulcov/factored.hpp"
#include "mulcov/scalar.hpp"

namespace mulcov {

// Largest cyclotomic index the library will materialize.
inline constexpr long kConductorBound = 512;

// Coefficients of the n-th cyclotomic polynomial, dense and ascending.
// Results are memoized.  Throws BoundExceeded above kConductorBound.
const std::vector<Int>& cyclotomic_poly(long n);

// Element of Q(zeta_n) on the power basis 1, zeta, ..., zeta^(phi(n)-1).
// coeffs always has exactly phi(n) entries.
struct CyclotomicElement {
  long n = 1;
  RatVec coeffs = RatVec::Constant(1, Rat(0));

  bool operator==(const CyclotomicElement& o) const {
    return n == o.n && coeffs == o.coeffs;
  }
  bool is_zero() const;
};

// zeta_n -> zeta_n^k with gcd(k, n) = 1.
struct GaloisMap {
  long n = 1;
  long k = 1;
};

CyclotomicElement cyc_rational(const Rat& q, long n = 1);
CyclotomicElement zeta(long n);
CyclotomicElement zeta_pow(long n, long e);

// Reduce a dense ascending coefficient list of powers of zeta_n.
CyclotomicElement cyc_from_powers(long n, const std::vector<Rat>& coeffs);

std::optional<Rat> as_rational(const CyclotomicElement& x);

CyclotomicElement operator+(const CyclotomicElement& a,
                            const CyclotomicElement& b);
CyclotomicElement operator-(const CyclotomicElement& a,
                            const CyclotomicElement& b);
CyclotomicElement operator-(const CyclotomicElement& a);
CyclotomicElement operator*(const CyclotomicElement& a,
                            const CyclotomicElement& b);
CyclotomicElement operator*(const Rat& c, const CyclotomicElement& a);

CyclotomicElement cyc_inv(const CyclotomicElement& a);
CyclotomicElement cyc_pow(const CyclotomicElement& a, const Int& e);

// Inclusion Q(zeta_m) -> Q(zeta_n) sending zeta_m to zeta_n^(n/m).
// Throws NotAMultiple unless m divides n.
CyclotomicElement embed(const CyclotomicElement& x, long n);

CyclotomicElement galois_apply(const GaloisMap& s, const CyclotomicElement& x);

// Does x lie in the subfield generated by zeta_n^(n/d)?  Requires d | x.n.
bool in_cyclotomic_subfield(const CyclotomicElement& x, long d);

// Smallest cyclotomic index n with a square root of the squarefree rational
// a, together with a witness w satisfying w * w == a exactly.  The witness is
// a product of quadratic Gauss sums.  Throws NotSquarefree.
std::pair<long, CyclotomicElement> sqrt_in_cyclotomic(const FactoredRational& a);

// Is the rational a a q-th power in Q(zeta_n)?  q must be prime.
bool is_qth_power_in_cyclotomic(const FactoredRational& a, const Int& q, long n);

}  // namespace mulcov

#include "mulcov/cyclotomic.hpp"

#include <map>
#include <numeric>

#include "mulcov/errors.hpp"
#include "mulcov/lattice.hpp"
#include "mulcov/primes.hpp"

namespace mulcov {

namespace {

using Poly = std::vector<Rat>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

long deg(const Poly& p) { return (long)p.size() - 1; }

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  trim(c);
  return c;
}

// In-place remainder of p modulo a monic integer polynomial.
void reduce_mod(Poly& p, const std::vector<Int>& monic) {
  long d = (long)monic.size() - 1;
  for (long i = (long)p.size() - 1; i >= d; --i) {
    if (p[i] == 0) continue;
    Rat c = p[i];
    for (long j = 0; j < d; ++j) p[i - d + j] -= c * Rat(monic[j]);
    p[i] = 0;
  }
  if ((long)p.size() > d) p.resize(d);
}

// Quotient and remainder with an arbitrary nonzero divisor.
std::pair<Poly, Poly> poly_divmod(Poly num, const Poly& den) {
  long dd = deg(den);
  Poly q(std::max<long>(deg(num) - dd + 1, 0), Rat(0));
  while (deg(num) >= dd) {
    Rat c = num.back() / den.back();
    long shift = deg(num) - dd;
    q[shift] = c;
    for (long j = 0; j <= dd; ++j) num[shift + j] -= c * den[j];
    trim(num);
    if ((long)num.size() > shift + dd) num.resize(shift + dd);
    trim(num);
  }
  trim(q);
  return {q, num};
}

// Exact division of integer polynomials with monic divisor.
std::vector<Int> int_div_exact(std::vector<Int> num,
                               const std::vector<Int>& den) {
  long dd = (long)den.size() - 1;
  long dq = (long)num.size() - 1 - dd;
  std::vector<Int> q(dq + 1, Int(0));
  for (long shift = dq; shift >= 0; --shift) {
    Int c = num[shift + dd];
    q[shift] = c;
    if (c == 0) continue;
    for (long j = 0; j <= dd; ++j) num[shift + j] -= c * den[j];
  }
  return q;
}

CyclotomicElement make(long n, Poly p) {
  reduce_mod(p, cyclotomic_poly(n));
  CyclotomicElement x;
  x.n = n;
  long d = phi(n);
  x.coeffs = RatVec::Constant(d, Rat(0));
  for (long i = 0; i < (long)p.size(); ++i) x.coeffs(i) = p[i];
  return x;
}

Poly to_poly(const CyclotomicElement& x) {
  Poly p(x.coeffs.size());
  for (long i = 0; i < x.coeffs.size(); ++i) p[i] = x.coeffs(i);
  trim(p);
  return p;
}

void check_same_field(const CyclotomicElement& a, const CyclotomicElement& b) {
  if (a.n != b.n)
    fail(errc::conductor_mismatch,
         "indices " + std::to_string(a.n) + " and " + std::to_string(b.n));
}

}  // namespace

const std::vector<Int>& cyclotomic_poly(long n) {
  static std::map<long, std::vector<Int>> cache;
  if (n < 1 || n > kConductorBound)
    fail(errc::bound_exceeded, "cyclotomic index " + std::to_string(n));
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // (x^n - 1) divided by the cyclotomic polynomials of the proper divisors
  std::vector<Int> num(n + 1, Int(0));
  num[0] = -1;
  num[n] = 1;
  for (long d : divisors(n))
    if (d < n) num = int_div_exact(num, cyclotomic_poly(d));
  return cache.emplace(n, std::move(num)).first->second;
}

bool CyclotomicElement::is_zero() const {
  for (long i = 0; i < coeffs.size(); ++i)
    if (coeffs(i) != 0) return false;
  return true;
}

CyclotomicElement cyc_rational(const Rat& q, long n) {
  (void)cyclotomic_poly(n);
  CyclotomicElement x;
  x.n = n;
  x.coeffs = RatVec::Constant(phi(n), Rat(0));
  x.coeffs(0) = q;
  return x;
}

CyclotomicElement zeta(long n) { return zeta_pow(n, 1); }

CyclotomicElement zeta_pow(long n, long e) {
  (void)cyclotomic_poly(n);
  e = ((e % n) + n) % n;
  Poly p(e + 1, Rat(0));
  p[e] = 1;
  return make(n, std::move(p));
}

CyclotomicElement cyc_from_powers(long n, const std::vector<Rat>& coeffs) {
  (void)cyclotomic_poly(n);
  Poly p = coeffs;
  trim(p);
  reduce_mod(p, cyclotomic_poly(n));
  return make(n, std::move(p));
}

std::optional<Rat> as_rational(const CyclotomicElement& x) {
  for (long i = 1; i < x.coeffs.size(); ++i)
    if (x.coeffs(i) != 0) return std::nullopt;
  return x.coeffs(0);
}

CyclotomicElement operator+(const CyclotomicElement& a,
                            const CyclotomicElement& b) {
  check_same_field(a, b);
  CyclotomicElement c = a;
  c.coeffs += b.coeffs;
  return c;
}

CyclotomicElement operator-(const CyclotomicElement& a,
                            const CyclotomicElement& b) {
  check_same_field(a, b);
  CyclotomicElement c = a;
  c.coeffs -= b.coeffs;
  return c;
}

CyclotomicElement operator-(const CyclotomicElement& a) {
  CyclotomicElement c = a;
  c.coeffs = -c.coeffs;
  return c;
}

CyclotomicElement operator*(const CyclotomicElement& a,
                            const CyclotomicElement& b) {
  check_same_field(a, b);
  return make(a.n, poly_mul(to_poly(a), to_poly(b)));
}

CyclotomicElement operator*(const Rat& c, const CyclotomicElement& a) {
  CyclotomicElement r = a;
  r.coeffs *= c;
  return r;
}

CyclotomicElement cyc_inv(const CyclotomicElement& a) {
  if (a.is_zero()) fail(errc::division_by_zero, "inverse of zero");
  // extended Euclid against the (irreducible) cyclotomic polynomial
  const std::vector<Int>& phi_n = cyclotomic_poly(a.n);
  Poly r0(phi_n.size());
  for (size_t i = 0; i < phi_n.size(); ++i) r0[i] = Rat(phi_n[i]);
  Poly r1 = to_poly(a);
  Poly s0 = {}, s1 = {Rat(1)};
  while (deg(r1) > 0) {
    auto [q, r] = poly_divmod(r0, r1);
    r0 = r1;
    r1 = std::move(r);
    Poly s2 = s0;
    Poly qs = poly_mul(q, s1);
    s2.resize(std::max(s2.size(), qs.size()), Rat(0));
    for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
    trim(s2);
    s0 = s1;
    s1 = std::move(s2);
  }
  Rat c = r1[0];
  for (auto& x : s1) x /= c;
  return make(a.n, std::move(s1));
}

CyclotomicElement cyc_pow(const CyclotomicElement& a, const Int& e) {
  CyclotomicElement base = e < 0 ? cyc_inv(a) : a;
  Int k = iabs(e);
  CyclotomicElement r = cyc_rational(Rat(1), a.n);
  while (k > 0) {
    if (mod_floor(k, 2) == 1) r = r * base;
    base = base * base;
    k /= 2;
  }
  return r;
}

CyclotomicElement embed(const CyclotomicElement& x, long n) {
  if (n % x.n != 0)
    fail(errc::not_a_multiple, std::to_string(x.n) + " into " +
                                   std::to_string(n));
  (void)cyclotomic_poly(n);
  long step = n / x.n;
  Poly p((x.coeffs.size() - 1) * step + 1, Rat(0));
  for (long i = 0; i < x.coeffs.size(); ++i) p[i * step] = x.coeffs(i);
  return make(n, std::move(p));
}

CyclotomicElement galois_apply(const GaloisMap& s, const CyclotomicElement& x) {
  if (s.n != x.n)
    fail(errc::conductor_mismatch, "map on " + std::to_string(s.n) +
                                       " applied in " + std::to_string(x.n));
  long k = ((s.k % s.n) + s.n) % s.n;
  if (std::gcd(k, s.n) != 1)
    fail(errc::malformed_input, "exponent not a unit mod " +
                                    std::to_string(s.n));
  Poly p(x.n, Rat(0));
  for (long i = 0; i < x.coeffs.size(); ++i)
    p[(i * k) % x.n] += x.coeffs(i);
  return make(x.n, std::move(p));
}

bool in_cyclotomic_subfield(const CyclotomicElement& x, long d) {
  if (x.n % d != 0)
    fail(errc::not_a_multiple, std::to_string(d) + " into " +
                                   std::to_string(x.n));
  // solve for x as a rational combination of the embedded subfield basis
  long dim = phi(d);
  RatMat basis(x.coeffs.size(), dim);
  for (long j = 0; j < dim; ++j) {
    CyclotomicElement b = embed(zeta_pow(d, j), x.n);
    basis.col(j) = b.coeffs;
  }
  return solve_rational(basis, x.coeffs).has_value();
}

std::pair<long, CyclotomicElement> sqrt_in_cyclotomic(
    const FactoredRational& a) {
  if (!is_squarefree(a)) fail(errc::not_squarefree, "square root basis");
  Int disc = fundamental_discriminant(a);
  if (disc == 1) return {1, cyc_rational(Rat(1))};
  Int nd = iabs(disc);
  if (nd > kConductorBound)
    fail(errc::bound_exceeded, "discriminant " + nd.get_str());
  long n = to_long(nd);
  CyclotomicElement w = cyc_rational(Rat(1), n);
  for (auto& [p, e] : a.exponents) {
    (void)e;
    long pl = to_long(p);
    if (pl == 2) {
      // zeta_8 + zeta_8^-1 squares to 2
      w = w * (zeta_pow(n, n / 8) + zeta_pow(n, -(n / 8)));
    } else {
      // quadratic Gauss sum for p
      Poly g(n, Rat(0));
      for (long t = 1; t < pl; ++t)
        g[(t * (n / pl)) % n] += Rat(kronecker(Int(t), p));
      w = w * make(n, std::move(g));
    }
  }
  Rat target = to_rational(a);
  auto sq = as_rational(w * w);
  if (!sq || (*sq != target && *sq != -target))
    fail(errc::not_squarefree, "witness verification");
  if (*sq != target) w = zeta_pow(n, n / 4) * w;
  return {n, w};
}

bool is_qth_power_in_cyclotomic(const FactoredRational& a, const Int& q,
                                long n) {
  if (!is_prime(q)) fail(errc::not_prime, "exponent " + q.get_str());
  if (n < 1 || n > kConductorBound)
    fail(errc::bound_exceeded, "cyclotomic index " + std::to_string(n));
  if (q != 2) {
    // an odd prime root of a rational never generates an abelian extension,
    // so only genuine rational q-th powers qualify
    for (auto& [p, e] : a.exponents)
      if (mod_floor(e, q) != 0) return false;
    return true;
  }
  FactoredRational k = squarefree_kernel(a);
  if (k.is_one()) return true;
  // the quadratic field of the kernel embeds exactly when its conductor
  // divides the cyclotomic index
  Int f = iabs(fundamental_discriminant(k));
  return mod_floor(Int(n), f) == 0;
}

}  // namespace mulcov

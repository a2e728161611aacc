#include "mulcov/zhat.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "mulcov/errors.hpp"
#include "mulcov/primes.hpp"

namespace mulcov {

namespace {

Int inv_mod(const Int& a, const Int& m) {
  if (m == 1) return 0;
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::logic_error("inv_mod: arguments not coprime");
  return r;
}

}  // namespace

ZhatApprox zhat_of(long r, long m) {
  if (m < 1) fail(errc::malformed_input, "zhat level must be positive");
  ZhatApprox z;
  for (long d : divisors(m)) z.residues[d] = ((r % d) + d) % d;
  return z;
}

long zhat_level(const ZhatApprox& z) {
  if (z.residues.empty())
    fail(errc::malformed_input, "empty zhat approximation");
  return z.residues.rbegin()->first;
}

void check_coherent(const ZhatApprox& z) {
  if (z.residues.empty())
    fail(errc::malformed_input, "empty zhat approximation");
  for (const auto& [n, r] : z.residues) {
    if (n < 1) fail(errc::malformed_input, "zhat index must be positive");
    if (r < 0 || r >= n) fail(errc::malformed_input, "zhat residue not reduced");
    for (long d : divisors(n)) {
      auto it = z.residues.find(d);
      if (it == z.residues.end())
        fail(errc::malformed_input,
             "zhat index set misses divisor " + std::to_string(d));
      if (r % d != it->second)
        fail(errc::malformed_input,
             "zhat residues incoherent at " + std::to_string(d) + " | " +
                 std::to_string(n));
    }
  }
}

ZhatApprox zhat_restrict(const ZhatApprox& z, long level) {
  check_coherent(z);
  auto it = z.residues.find(level);
  if (it == z.residues.end())
    fail(errc::malformed_input, "restriction level outside the index set");
  return zhat_of(it->second, level);
}

ZhatApprox crt_solve(const CongruenceSystem& sys) {
  for (const auto& c : sys.constraints)
    if (c.modulus < 1) fail(errc::malformed_input, "modulus must be positive");

  // Pairwise merge.  Pairwise compatibility implies global solvability, so
  // on failure some single earlier constraint conflicts with the new one.
  Int r = 0;
  Int m = 1;
  for (size_t i = 0; i < sys.constraints.size(); ++i) {
    Int n(sys.constraints[i].modulus);
    Int b = mod_floor(Int(sys.constraints[i].target), n);
    Int g = gcd(m, n);
    if (mod_floor(b - r, g) != 0) {
      for (size_t j = 0; j < i; ++j) {
        long nj = sys.constraints[j].modulus;
        long gj = std::gcd(sys.constraints[j].modulus,
                           sys.constraints[i].modulus);
        long bj = ((sys.constraints[j].target % nj) + nj) % nj;
        long bi = ((sys.constraints[i].target %
                    sys.constraints[i].modulus) +
                   sys.constraints[i].modulus) %
                  sys.constraints[i].modulus;
        if ((bi - bj) % gj != 0)
          fail(errc::inconsistent,
               "no residue satisfies moduli " + std::to_string(nj) + " and " +
                   std::to_string(sys.constraints[i].modulus));
      }
      fail(errc::inconsistent,
           "no residue satisfies modulus " +
               std::to_string(sys.constraints[i].modulus));
    }
    // x = r + m*k with k = (b-r)/g * inv(m/g) mod n/g.
    Int mg = divexact(m, g);
    Int ng = divexact(n, g);
    Int k = mod_floor(divexact(b - r, g) * inv_mod(mg, ng), ng);
    r = r + m * k;
    m = m * ng;
    r = mod_floor(r, m);
  }

  if (!fits_long(m))
    fail(errc::bound_exceeded, "crt modulus exceeds the machine range");
  long lcm_l = to_long(m);
  long res = to_long(mod_floor(r, m));
  return zhat_of(res, lcm_l);
}

}  // namespace mulcov

#pragma once

#include <map>
#include <vector>

#include "mulcov/scalar.hpp"

namespace mulcov {

// Truncated profinite integer: one residue per index, the index set finite
// and closed under divisors, residues coherent under reduction.
struct ZhatApprox {
  std::map<long, long> residues;  // n -> r_n, 0 <= r_n < n

  bool operator==(const ZhatApprox& o) const = default;
};

struct Congruence {
  long modulus = 1;
  long target = 0;
};

struct CongruenceSystem {
  std::vector<Congruence> constraints;
};

// r modulo every divisor of m.
ZhatApprox zhat_of(long r, long m);

// Largest index; this determines the whole approximation.
long zhat_level(const ZhatApprox& z);

// Raises MalformedInput unless the index set is divisor closed and the
// residues are reduced and coherent.
void check_coherent(const ZhatApprox& z);

// Restriction to the divisor closure of level.
ZhatApprox zhat_restrict(const ZhatApprox& z, long level);

// Unique solution of the system modulo the lcm of the moduli, residues on
// the divisor closure of the lcm.  Raises Inconsistent naming an offending
// pair of moduli when no solution exists.
ZhatApprox crt_solve(const CongruenceSystem& sys);

}  // namespace mulcov

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mulcov/scalar.hpp"

namespace mulcov {

// Deterministic for all 64-bit inputs.
bool is_prime_u64(uint64_t n);

bool is_prime(const Int& n);

// Prime factorization of |n|, n != 0.  Trial division up to trial_bound,
// then Miller-Rabin plus Pollard rho on what is left.  A composite survivor
// wider than 64 bits raises FactorizationBudgetExceeded.
std::map<Int, Int> factor_abs(const Int& n, unsigned long trial_bound = 100000);

std::vector<long> primes_up_to(long bound);

long phi(long n);

// Divisors of n in increasing order.
std::vector<long> divisors(long n);

}  // namespace mulcov

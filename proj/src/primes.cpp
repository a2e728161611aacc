#include "mulcov/primes.hpp"

#include <algorithm>
#include <numeric>

#include "mulcov/errors.hpp"

namespace mulcov {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return (uint64_t)((unsigned __int128)a * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set decides primality for every n < 2^64.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
  fail(errc::factorization_budget_exceeded,
       "primality undecided beyond 64 bits: " + n.get_str());
}

namespace {

uint64_t pollard_brent(uint64_t n) {
  if ((n & 1) == 0) return 2;
  for (uint64_t c = 1;; ++c) {
    uint64_t x = 2, y = 2, d = 1;
    uint64_t q = 1;
    int lam = 1;
    while (d == 1) {
      x = y;
      for (int i = 0; i < lam; ++i) y = (mulmod_u64(y, y, n) + c) % n;
      int k = 0;
      while (k < lam && d == 1) {
        uint64_t ys = y;
        int lim = std::min(128, lam - k);
        for (int i = 0; i < lim; ++i) {
          y = (mulmod_u64(y, y, n) + c) % n;
          uint64_t diff = x > y ? x - y : y - x;
          q = mulmod_u64(q, diff ? diff : 1, n);
        }
        d = std::gcd(q, n);
        if (d != 1 && d != n) return d;
        if (d == n) {
          // Backtrack one step at a time.
          d = 1;
          do {
            ys = (mulmod_u64(ys, ys, n) + c) % n;
            uint64_t diff = x > ys ? x - ys : ys - x;
            d = std::gcd(diff ? diff : n, n);
          } while (d == 1);
          if (d != n) return d;
          break;
        }
        k += lim;
      }
      if (d == n) break;
      lam *= 2;
    }
    if (d != n && d != 1) return d;
  }
}

void factor_u64(uint64_t n, std::map<Int, Int>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out[Int((unsigned long)n)] += 1;
    return;
  }
  uint64_t d = pollard_brent(n);
  factor_u64(d, out);
  factor_u64(n / d, out);
}

}  // namespace

std::map<Int, Int> factor_abs(const Int& n, unsigned long trial_bound) {
  if (n == 0) fail(errc::zero_input, "factor of zero");
  Int m = iabs(n);
  std::map<Int, Int> out;
  for (unsigned long p = 2; p <= trial_bound && p * p <= m; p == 2 ? p = 3 : p += 2) {
    if (m % p == 0) {
      Int ip((unsigned long)p);
      while (m % p == 0) {
        out[ip] += 1;
        m = divexact(m, ip);
      }
    }
  }
  if (m == 1) return out;
  if (m.fits_ulong_p()) {
    factor_u64(m.get_ui(), out);
    return out;
  }
  fail(errc::factorization_budget_exceeded,
       "cofactor exceeds 64 bits: " + m.get_str());
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(bound + 1, true);
  for (long i = 2; i <= bound; ++i) {
    if (sieve[i]) {
      out.push_back(i);
      for (long j = 2 * i; j <= bound; j += i) sieve[j] = false;
    }
  }
  return out;
}

long phi(long n) {
  long r = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      r -= r / p;
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

std::vector<long> divisors(long n) {
  std::vector<long> out;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mulcov

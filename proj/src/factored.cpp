#include "mulcov/factored.hpp"

#include "mulcov/errors.hpp"
#include "mulcov/primes.hpp"

namespace mulcov {

FactoredRational factor(const Rat& q, unsigned long trial_bound) {
  if (q == 0) fail(errc::zero_input, "factor of zero");
  FactoredRational out;
  out.sign = q < 0 ? -1 : 1;
  Int num = iabs(q.get_num());
  Int den = q.get_den();
  for (auto& [p, e] : factor_abs(num, trial_bound)) out.exponents[p] += e;
  for (auto& [p, e] : factor_abs(den, trial_bound)) out.exponents[p] -= e;
  std::erase_if(out.exponents, [](const auto& kv) { return kv.second == 0; });
  return out;
}

Rat to_rational(const FactoredRational& f) {
  Int num = f.sign;
  Int den = 1;
  for (auto& [p, e] : f.exponents) {
    Int pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), iabs(e).get_ui());
    if (e > 0)
      num *= pw;
    else
      den *= pw;
  }
  return make_rat(num, den);
}

FactoredRational fr_mul(const FactoredRational& a, const FactoredRational& b) {
  FactoredRational out;
  out.sign = a.sign * b.sign;
  out.exponents = a.exponents;
  for (auto& [p, e] : b.exponents) out.exponents[p] += e;
  std::erase_if(out.exponents, [](const auto& kv) { return kv.second == 0; });
  return out;
}

FactoredRational fr_pow(const FactoredRational& a, const Int& e) {
  FactoredRational out;
  out.sign = (a.sign == -1 && mod_floor(e, 2) == 1) ? -1 : 1;
  if (e != 0) {
    for (auto& [p, x] : a.exponents) out.exponents[p] = x * e;
  }
  return out;
}

FactoredRational fr_inv(const FactoredRational& a) { return fr_pow(a, -1); }

Int exponent_content(const FactoredRational& a) {
  Int g = 0;
  for (auto& [p, e] : a.exponents) g = gcd(g, e);
  return g;
}

FactoredRational squarefree_kernel(const FactoredRational& a) {
  FactoredRational out;
  out.sign = a.sign;
  for (auto& [p, e] : a.exponents) {
    if (mod_floor(e, 2) == 1) out.exponents[p] = 1;
  }
  return out;
}

bool is_squarefree(const FactoredRational& a) {
  for (auto& [p, e] : a.exponents) {
    if (e != 1) return false;
  }
  return true;
}

Int fundamental_discriminant(const FactoredRational& sf) {
  if (!is_squarefree(sf)) fail(errc::not_squarefree, "kernel expected");
  Int a = to_rational(sf).get_num();
  return mod_floor(a, 4) == 1 ? a : Int(4 * a);
}

}  // namespace mulcov

#include "mulcov/profinite.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "mulcov/errors.hpp"

namespace mulcov {

namespace {

void check_bound(long bound) {
  if (bound < 1) fail(errc::malformed_input, "level bound must be positive");
  if (bound > 100000)
    fail(errc::budget_exceeded, "level bound past the working range");
}

// lcm of the committed root denominators of one generator; levels dividing
// it are forced, deeper ones would involve a canonical choice.
long pinned_level(const CoverPresentation& p, const std::string& g) {
  long out = 1;
  for (const auto& [key, v] : p.roots) {
    (void)v;
    if (key.first != g) continue;
    Int l = lcm(Int(out), Int(key.second));
    if (!fits_long(l) || to_long(l) > 1000000)
      fail(errc::bound_exceeded, "committed denominators grow past the bound");
    out = to_long(l);
  }
  return out;
}

// The pinned n-th root of a generator, read through the evaluation map.
CoverValue read_root(CoverPresentation& p, const std::string& g, long n) {
  return eval_ex(p, h_unit(g, make_rat(1, n)), n);
}

// Phase exponent beta with root_H(h, n) = root_G(g, n) e(beta / n).
long level_shift(CoverPresentation& h_side, const std::string& h,
                 CoverPresentation& g_side, const std::string& g, long n) {
  CoverValue q = cv_mul(read_root(h_side, h, n), cv_inv(read_root(g_side, g, n)));
  if (!q.is_torsion())
    fail(errc::inconsistent,
         "roots of " + h + " and " + g + " do not sit over the same element");
  Rat t = q.zeta * Rat(n);
  t.canonicalize();
  if (t.get_den() != 1)
    fail(errc::inconsistent, "root discrepancy at level " + std::to_string(n) +
                                 " is not an n-th root of unity");
  return to_long(Int(t.get_num()));
}

}  // namespace

ZhatApprox nu_for(CoverPresentation& h_side, const std::string& h,
                  CoverPresentation& g_side, const std::string& g,
                  long bound) {
  check_bound(bound);
  if (h == h_side.kernel || g == g_side.kernel)
    fail(errc::malformed_input, "kernel shifts are read off directly");
  if (!h_side.values.count(h))
    fail(errc::malformed_input, "unknown generator " + h);
  if (!g_side.values.count(g))
    fail(errc::malformed_input, "unknown generator " + g);
  if (!(h_side.values.at(h) == g_side.values.at(g)))
    fail(errc::inconsistent,
         h + " and " + g + " do not present the same element");

  long forced = std::gcd(pinned_level(h_side, h), pinned_level(g_side, g));
  CongruenceSystem sys;
  sys.constraints.push_back({1, 0});
  for (long n = 2; n <= bound; ++n) {
    if (forced % n != 0) continue;
    sys.constraints.push_back({n, level_shift(h_side, h, g_side, g, n)});
  }
  return crt_solve(sys);
}

SigmaMap build_sigma(CoverPresentation& h_side, CoverPresentation& g_side,
                     long bound) {
  check_bound(bound);
  if (h_side.generators != g_side.generators ||
      h_side.kernel != g_side.kernel ||
      h_side.kernel_scale != g_side.kernel_scale)
    fail(errc::inconsistent, "presentations do not share a generator basis");
  for (const auto& [name, v] : h_side.values)
    if (!(v == g_side.values.at(name)))
      fail(errc::inconsistent,
           name + " does not present the same element on both sides");

  SigmaMap sigma;
  std::vector<std::string> named;
  for (const auto& gname : h_side.generators) {
    if (gname == h_side.kernel) continue;
    sigma.shifts[gname] = nu_for(h_side, gname, g_side, gname, bound);
    named.push_back(gname);
  }

  // The commuting identity at every applicable level, re-read exactly.
  for (const auto& gname : named) {
    const ZhatApprox& nu = sigma.shifts.at(gname);
    for (const auto& [n, res] : nu.residues) {
      if (n > bound) continue;
      CoverValue expect = cv_mul(read_root(g_side, gname, n),
                                 cv_root_of_unity(make_rat(res, n)));
      if (!(read_root(h_side, gname, n) == expect))
        fail(errc::inconsistent,
             "shift fails the commuting identity at level " + std::to_string(n));
    }
  }

  // Additivity on presented sums: the discrepancy of a product of two
  // generators equals the sum of their shifts at every common level.
  for (size_t i = 0; i + 1 < named.size(); ++i) {
    const std::string& g1 = named[i];
    const std::string& g2 = named[i + 1];
    long common =
        std::gcd(std::gcd(pinned_level(h_side, g1), pinned_level(g_side, g1)),
                 std::gcd(pinned_level(h_side, g2), pinned_level(g_side, g2)));
    for (long n = 2; n <= bound; ++n) {
      if (common % n != 0) continue;
      CoverValue lhs = cv_mul(
          cv_mul(read_root(h_side, g1, n), read_root(h_side, g2, n)),
          cv_inv(cv_mul(read_root(g_side, g1, n), read_root(g_side, g2, n))));
      long b1 = sigma.shifts.at(g1).residues.at(n);
      long b2 = sigma.shifts.at(g2).residues.at(n);
      if (!(lhs == cv_root_of_unity(make_rat(b1 + b2, n))))
        fail(errc::inconsistent,
             "shifts are not additive at level " + std::to_string(n));
    }
  }
  return sigma;
}

}  // namespace mulcov

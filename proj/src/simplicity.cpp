#include "mulcov/simplicity.hpp"

#include <numeric>

#include "mulcov/cyclotomic.hpp"
#include "mulcov/errors.hpp"
#include "mulcov/lattice.hpp"

namespace mulcov {

namespace {

FactoredRational from_row(const std::vector<Atom>& support, const IntVec& row) {
  FactoredRational f;
  for (long j = 0; j < row.size(); ++j)
    if (row(j) != 0) f.exponents[std::get<Int>(support[j])] = row(j);
  return f;
}

FactoredRational tuple_power(const std::vector<FactoredRational>& t,
                             const IntVec& c) {
  FactoredRational prod;
  for (size_t i = 0; i < t.size(); ++i)
    prod = fr_mul(prod, fr_pow(t[i], c(i)));
  return prod;
}

}  // namespace

bool is_k_simple(const FactoredRational& a, const Int& k) {
  if (k < 2) fail(errc::malformed_input, "power bound below 2");
  if (a.is_torsion()) return false;
  return gcd(exponent_content(a), k) == 1;
}

SimplicityCertificate is_simple_tuple(const std::vector<FactoredRational>& t) {
  SimplicityCertificate cert;
  cert.tuple = t;
  ExponentLattice l = lattice_of_tuple(t);
  SmithDecomposition d = smith(l.rows);
  long rk = 0;
  long diag = std::min(d.s.rows(), d.s.cols());
  for (long i = 0; i < diag; ++i)
    if (d.s(i, i) != 0) {
      cert.smith.push_back(d.s(i, i));
      ++rk;
    }
  cert.independent = rk == l.rows.rows();
  bool saturated = true;
  for (const Int& v : cert.smith)
    if (v != 1) saturated = false;
  cert.verdict = cert.independent && saturated;
  if (cert.independent && !saturated) {
    long j = 0;
    while (cert.smith[j] == 1) ++j;
    Int dj = cert.smith[j];
    IntVec comb = d.u.row(j).transpose();
    FactoredRational b = tuple_power(t, comb);
    IntVec row = (d.u.row(j) * l.rows).transpose();
    FactoredRational x = from_row(l.support, (row / dj).eval());
    PurityWitness w;
    if (b.sign > 0) {
      w = {comb, b, dj, x};
    } else if (mod_floor(dj, 2) == 1) {
      x.sign = -1;
      w = {comb, b, dj, x};
    } else {
      // a negative product with even order: square everything
      w = {(Int(2) * comb).eval(), fr_mul(b, b), 2 * dj, x};
    }
    if (fr_pow(w.solution, w.n) != w.b)
      fail(errc::not_simple, "witness verification");
    cert.witness = std::move(w);
  }
  return cert;
}

std::pair<long, long> stabilizer_N(const FactoredRational& a) {
  if (a.is_torsion() || exponent_content(a) != 1)
    fail(errc::not_simple, "stabilizer of a non-simple rational");
  auto [n, w] = sqrt_in_cyclotomic(squarefree_kernel(a));
  (void)w;
  return {2, n};
}

PureHullBasis pure_hull(const std::vector<FactoredRational>& t) {
  if (!is_mult_independent(t))
    fail(errc::not_independent, "pure hull basis");
  PureHullBasis hull;
  hull.base_tuple = t;
  ExponentLattice l = lattice_of_tuple(t);
  ExponentLattice sat = saturate(l);
  Int covol = 1;
  if (!t.empty()) {
    auto idx = group_index(l, sat);
    covol = *idx;
  }
  long m = 1;
  for (long i = 0; i < sat.rows.rows(); ++i) {
    FactoredRational b = from_row(sat.support, sat.rows.row(i).transpose());
    auto [cond, witness] = sqrt_in_cyclotomic(squarefree_kernel(b));
    (void)witness;
    m = std::lcm(m, cond);
    hull.half_basis.push_back(canonical_roots({b}, 2));
  }
  hull.conductor = m;
  Int two_r = 1;
  two_r <<= t.size();
  hull.index = covol * two_r;
  return hull;
}

}  // namespace mulcov

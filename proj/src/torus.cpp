#include "mulcov/torus.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "mulcov/errors.hpp"

namespace mulcov {

namespace {

long mod_l(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

void check_coord(const TorusCoordinate& c) {
  if (c.twist_order < 1) fail(errc::malformed_input, "twist order must be positive");
  for (const auto& [name, e] : c.symbols) {
    if (name.empty()) fail(errc::malformed_input, "empty symbol name");
    if (e == 0) fail(errc::malformed_input, "zero symbol exponent");
  }
}

size_t common_dimension(const std::vector<TorusPoint>& gens) {
  size_t dim = gens.empty() ? 0 : gens.front().size();
  for (const auto& g : gens) {
    if (g.size() != dim)
      fail(errc::malformed_input, "torus points of mixed dimension");
    for (const auto& c : g) check_coord(c);
  }
  return dim;
}

// Order of the torsion part of one generator: lcm of twist orders with the
// sign folded in as a twist of order 2.
long torsion_order(const TorusPoint& g) {
  long k = 1;
  for (const auto& c : g) {
    k = std::lcm(k, c.twist_order);
    if (c.value.sign < 0) k = std::lcm(k, 2L);
  }
  return k;
}

// Numerator of the torsion angle of one coordinate over the common order k.
long torsion_angle(const TorusCoordinate& c, long k) {
  long a = mod_l(c.twist_exp, c.twist_order) * (k / c.twist_order);
  if (c.value.sign < 0) a += k / 2;
  return mod_l(a, k);
}

}  // namespace

TorusCoordinate coord_rational(const FactoredRational& v) {
  TorusCoordinate c;
  c.value = v;
  return c;
}

TorusCoordinate coord_twisted(const FactoredRational& v, long order, long exp) {
  if (order < 1) fail(errc::malformed_input, "twist order must be positive");
  TorusCoordinate c;
  c.value = v;
  c.twist_order = order;
  c.twist_exp = mod_l(exp, order);
  return c;
}

TorusCoordinate coord_symbol(const std::string& name, const Int& exp) {
  if (exp == 0) fail(errc::malformed_input, "zero symbol exponent");
  TorusCoordinate c;
  c.symbols[name] = exp;
  return c;
}

TorusPoint point_mul(const TorusPoint& a, const TorusPoint& b) {
  if (a.size() != b.size())
    fail(errc::malformed_input, "torus points of mixed dimension");
  TorusPoint out(a.size());
  for (size_t j = 0; j < a.size(); ++j) {
    const TorusCoordinate& x = a[j];
    const TorusCoordinate& y = b[j];
    TorusCoordinate& c = out[j];
    c.value = fr_mul(x.value, y.value);
    c.twist_order = std::lcm(x.twist_order, y.twist_order);
    c.twist_exp = mod_l(x.twist_exp * (c.twist_order / x.twist_order) +
                            y.twist_exp * (c.twist_order / y.twist_order),
                        c.twist_order);
    if (c.twist_exp == 0) c.twist_order = 1;
    c.symbols = x.symbols;
    for (const auto& [name, e] : y.symbols) {
      Int& slot = c.symbols[name];
      slot += e;
      if (slot == 0) c.symbols.erase(name);
    }
  }
  return out;
}

TorusPoint point_inv(const TorusPoint& a) {
  TorusPoint out(a.size());
  for (size_t j = 0; j < a.size(); ++j) {
    TorusCoordinate& c = out[j];
    c.value = fr_inv(a[j].value);
    c.twist_order = a[j].twist_order;
    c.twist_exp = mod_l(-a[j].twist_exp, c.twist_order);
    if (c.twist_exp == 0) c.twist_order = 1;
    for (const auto& [name, e] : a[j].symbols) c.symbols[name] = -e;
  }
  return out;
}

ExponentLattice relation_lattice(const std::vector<TorusPoint>& gens) {
  size_t dim = common_dimension(gens);

  ExponentLattice out;
  for (size_t j = 0; j < dim; ++j) out.support.push_back(Atom(Int(j + 1)));

  // Free conditions: one per (generator, prime) and (generator, symbol)
  // pair.  Torsion conditions get one auxiliary column each, turning the
  // congruence sum_j n_j a_ij = 0 mod k_i into an exact kernel row.
  std::vector<long> torsion;  // torsion order per generator, 1 = none
  size_t aux = 0;
  for (const auto& g : gens) {
    long k = torsion_order(g);
    torsion.push_back(k);
    if (k > 1) ++aux;
  }

  std::vector<IntVec> cond;
  size_t cols = dim + aux;
  size_t aux_at = dim;
  for (size_t i = 0; i < gens.size(); ++i) {
    const TorusPoint& g = gens[i];
    std::set<Int> primes;
    std::set<std::string> names;
    for (const auto& c : g) {
      for (const auto& [p, e] : c.value.exponents) primes.insert(p);
      for (const auto& [s, e] : c.symbols) names.insert(s);
    }
    for (const Int& p : primes) {
      IntVec row = IntVec::Zero(static_cast<long>(cols));
      for (size_t j = 0; j < dim; ++j) {
        auto it = g[j].value.exponents.find(p);
        if (it != g[j].value.exponents.end()) row(static_cast<long>(j)) = it->second;
      }
      cond.push_back(std::move(row));
    }
    for (const std::string& s : names) {
      IntVec row = IntVec::Zero(static_cast<long>(cols));
      for (size_t j = 0; j < dim; ++j) {
        auto it = g[j].symbols.find(s);
        if (it != g[j].symbols.end()) row(static_cast<long>(j)) = it->second;
      }
      cond.push_back(std::move(row));
    }
    if (torsion[i] > 1) {
      IntVec row = IntVec::Zero(static_cast<long>(cols));
      for (size_t j = 0; j < dim; ++j)
        row(static_cast<long>(j)) = Int(torsion_angle(g[j], torsion[i]));
      row(static_cast<long>(aux_at)) = Int(torsion[i]);
      ++aux_at;
      cond.push_back(std::move(row));
    }
  }

  if (cond.empty()) {
    // No constraint at all (no generators, or identity generators): every
    // character vanishes on the subgroup, so the lattice is full.
    out.rows = IntMat::Identity(static_cast<long>(dim), static_cast<long>(dim));
    return out;
  }

  IntMat m(static_cast<long>(cond.size()), static_cast<long>(cols));
  for (size_t r = 0; r < cond.size(); ++r) m.row(static_cast<long>(r)) = cond[r];

  IntMat ker = col_kernel(m);
  IntMat proj(ker.rows(), static_cast<long>(dim));
  for (long r = 0; r < ker.rows(); ++r)
    for (long j = 0; j < static_cast<long>(dim); ++j) proj(r, j) = ker(r, j);
  out.rows = lower_hnf(proj);
  return out;
}

Int closure_components(const std::vector<TorusPoint>& gens) {
  ExponentLattice l = relation_lattice(gens);
  Int count = 1;
  for (const Int& d : smith_invariants(l.rows)) count *= d;
  return count;
}

Int pullback_components(const std::vector<TorusPoint>& gens, long d) {
  if (d < 1) fail(errc::malformed_input, "pullback exponent must be positive");
  ExponentLattice l = relation_lattice(gens);
  Int count = 1;
  for (const Int& s : smith_invariants(l.rows)) count *= s;
  for (long i = 0; i < rank(l.rows); ++i) count *= d;
  return count;
}

}  // namespace mulcov

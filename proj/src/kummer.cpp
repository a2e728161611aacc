#include "mulcov/kummer.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>

#include "mulcov/errors.hpp"
#include "mulcov/lattice.hpp"
#include "mulcov/primes.hpp"

namespace mulcov {
namespace {

long mod_l(long x, long m) { return ((x % m) + m) % m; }

// Q(zeta_x) = Q(zeta_cond(x)): even conductors are never 2 mod 4.
long effective_conductor(long x) {
  if (x < 1) fail(errc::malformed_input, "conductor must be positive");
  return (x % 4 == 2) ? x / 2 : x;
}

bool zeta_in(long n, long M) {
  return effective_conductor(M) % effective_conductor(n) == 0;
}

int chi8(long x) {
  long r = mod_l(x, 8);
  return (r == 1 || r == 7) ? 1 : -1;
}

int chi_m4(long x) { return (mod_l(x, 4) == 1) ? 1 : -1; }

int legendre(long a, long p) {
  return static_cast<int>(kronecker(Int(a), Int(p)));
}

// One coordinate of a frame: the denom-th root of base.  Fixed coordinates
// carry the absolute phase of the value adjoined to the base field.
struct FrameCoord {
  FactoredRational base;
  long denom = 1;
  long phase = 0;
  bool fixed = false;
};

// Symbolic model of the automorphisms of Omega over B, where Omega is
// generated over a cyclotomic field containing every needed root of unity
// by the positive real m-th roots x_i of |base_i|, and B is the field of
// the context: Q(zeta_conductor) extended by the fixed coordinates.  An
// automorphism is a pair (t, a): zeta -> zeta^t, x_i -> zeta_m^(a_i) x_i.
// Only t mod q2 and the Legendre signs of t at the free odd primes enter
// any constraint, so t is carried in that split form and never enumerated
// as a residue modulo the full cyclotomic level.
struct Frame {
  std::vector<FrameCoord> coords;
  long m = 1;          // lcm of coordinate denominators
  long conductor = 1;  // t == 1 mod conductor
  long q2 = 8;         // lcm(conductor, 2m, 8)
  std::vector<long> s_primes;  // odd support primes prime to q2
  std::vector<Atom> support;
  IntMat vecs;  // row i: exponent vector of |base_i| on support

  // Generator of the residue classes c with x^c = u * sqrt(v) cyclotomic.
  // chi_{D(v)}(t) factors over s_primes (s_idx), odd primes inside q2
  // (tau_primes), an even part and a sign part read off tau.
  struct Rel {
    std::vector<long> c;
    std::vector<size_t> s_idx;
    std::vector<long> tau_primes;
    bool even = false;
    bool neg = false;
  };
  std::vector<Rel> rels;

  std::vector<long> taus;
};

int rel_chi(const Frame::Rel& rel, long tau, unsigned eps) {
  int s = 1;
  for (size_t i : rel.s_idx)
    if (eps >> i & 1u) s = -s;
  for (long p : rel.tau_primes) s *= legendre(mod_l(tau, p), p);
  if (rel.even) s *= chi8(tau);
  if (rel.neg) s *= chi_m4(tau);
  return s;
}

// The relation constraints are multiplicative in c, so checking the stored
// generators checks the whole class group.
bool rels_ok(const Frame& f, const std::vector<long>& a, long tau,
             unsigned eps) {
  for (const auto& rel : f.rels) {
    long dot = 0;
    for (size_t i = 0; i < a.size(); ++i)
      dot = mod_l(dot + a[i] * rel.c[i], f.m);
    long rhs = (rel_chi(rel, tau, eps) == 1) ? 0 : f.m / 2;
    if (dot != rhs) return false;
  }
  return true;
}

Frame build_frame(std::vector<FrameCoord> coords, long conductor) {
  Frame f;
  f.coords = std::move(coords);
  f.conductor = effective_conductor(conductor);
  for (const auto& co : f.coords) f.m = std::lcm(f.m, co.denom);
  f.q2 = std::lcm(std::lcm(f.conductor, 2 * f.m), 8L);

  std::vector<FactoredRational> abs;
  for (const auto& co : f.coords) {
    FactoredRational a = co.base;
    a.sign = 1;
    abs.push_back(a);
  }
  ExponentLattice lat = lattice_of_tuple(abs);
  f.support = lat.support;
  f.vecs = lat.rows;

  for (const auto& at : f.support) {
    const Int& p = std::get<Int>(at);
    if (p == 2) continue;
    if (!fits_long(p))
      fail(errc::bound_exceeded, "support prime too large for character data");
    long pl = to_long(p);
    if (f.q2 % pl != 0) f.s_primes.push_back(pl);
  }
  if (f.s_primes.size() > 20)
    fail(errc::budget_exceeded, "too many free character primes");

  // Generators of {c in (Z/m)^r : m | 2 * c^T vecs} via a Smith form: with
  // c = u^T y the condition is diagonal in y.
  const long r = f.vecs.rows();
  const long s = f.vecs.cols();
  if (r > 0) {
    SmithDecomposition sd = smith(f.vecs);
    for (long j = 0; j < r; ++j) {
      Int dj = (j < std::min(r, s)) ? sd.s(j, j) : Int(0);
      long step = 1;
      if (dj != 0) {
        Int g = gcd(Int(f.m), 2 * dj);
        step = f.m / to_long(g);
      }
      std::vector<long> c(r);
      bool zero = true;
      for (long i = 0; i < r; ++i) {
        c[i] = mod_l(step * to_long(sd.u(j, i)), f.m);
        if (c[i] != 0) zero = false;
      }
      if (zero) continue;
      Frame::Rel rel;
      rel.c = c;
      for (long k = 0; k < s; ++k) {
        Int e = 0;
        for (long i = 0; i < r; ++i) e += Int(c[i]) * f.vecs(i, k);
        e *= 2;
        if (mod_floor(e, Int(f.m)) != 0)
          fail(errc::malformed_input, "frame relation generator invariant");
        if (mod_floor(divexact(e, Int(f.m)), Int(2)) == 0) continue;
        const Int& p = std::get<Int>(f.support[k]);
        if (p == 2) {
          rel.even = true;
          continue;
        }
        if (mod_floor(p, Int(4)) == 3) rel.neg = !rel.neg;
        long pl = to_long(p);
        if (f.conductor % pl == 0) continue;  // t == 1 mod p already
        if (f.q2 % pl == 0)
          rel.tau_primes.push_back(pl);
        else
          rel.s_idx.push_back(static_cast<size_t>(
              std::lower_bound(f.s_primes.begin(), f.s_primes.end(), pl) -
              f.s_primes.begin()));
      }
      f.rels.push_back(std::move(rel));
    }
  }

  for (long x = 1; x <= f.q2; ++x)
    if (std::gcd(x, f.q2) == 1 && (x - 1) % f.conductor == 0)
      f.taus.push_back(x);
  return f;
}

// Walk the whole automorphism group: fixed coordinates are pinned by their
// phase, the rest range over Z/m.  fn gets (tau, eps, a); returning false
// stops the walk.
void for_each_element(const Frame& f, long budget,
                      const std::function<bool(long, unsigned, const std::vector<long>&)>& fn) {
  const size_t r = f.coords.size();
  long steps = 0;
  for (long tau : f.taus) {
    for (unsigned eps = 0; eps < (1u << f.s_primes.size()); ++eps) {
      std::vector<long> base(r, 0), den(r, 1);
      bool ok = true;
      for (size_t i = 0; i < r; ++i) {
        if (!f.coords[i].fixed) {
          den[i] = 1;  // free over Z/m in steps of 1
          base[i] = 0;
          continue;
        }
        long d = f.coords[i].denom;
        long rhs = mod_l(-f.coords[i].phase * (tau - 1), 2 * d);
        if (rhs % 2 != 0) {
          ok = false;
          break;
        }
        base[i] = rhs / 2;
        den[i] = d;
      }
      if (!ok) continue;
      std::vector<long> k(r, 0), a(r);
      while (true) {
        for (size_t i = 0; i < r; ++i) a[i] = base[i] + den[i] * k[i];
        if (++steps > budget)
          fail(errc::budget_exceeded, "automorphism walk too large");
        if (rels_ok(f, a, tau, eps))
          if (!fn(tau, eps, a)) return;
        size_t i = 0;
        for (; i < r; ++i) {
          if ((k[i] + 1) * den[i] < f.m) {
            ++k[i];
            break;
          }
          k[i] = 0;
        }
        if (i == r) break;
      }
    }
  }
}

// Find an automorphism whose phase action sends `from` to `to` on the
// non-fixed coordinates.  Phases are absolute, modulo twice the denominator.
std::optional<std::tuple<long, unsigned, std::vector<long>>> find_map(
    const Frame& f, const std::vector<long>& from,
    const std::vector<long>& to) {
  const size_t r = f.coords.size();
  for (long tau : f.taus) {
    for (unsigned eps = 0; eps < (1u << f.s_primes.size()); ++eps) {
      std::vector<long> base(r), den(r);
      bool ok = true;
      size_t prim = 0;
      for (size_t i = 0; i < r && ok; ++i) {
        long d = f.coords[i].denom;
        long rhs;
        if (f.coords[i].fixed) {
          rhs = mod_l(-f.coords[i].phase * (tau - 1), 2 * d);
        } else {
          rhs = mod_l(to[prim] - from[prim] * tau, 2 * d);
          ++prim;
        }
        if (rhs % 2 != 0) {
          ok = false;
          break;
        }
        base[i] = rhs / 2;
        den[i] = d;
      }
      if (!ok) continue;
      long lifts = 1;
      for (size_t i = 0; i < r; ++i) {
        lifts *= f.m / den[i];
        if (lifts > 200000)
          fail(errc::budget_exceeded, "conjugacy lift space too large");
      }
      std::vector<long> k(r, 0), a(r);
      while (true) {
        for (size_t i = 0; i < r; ++i) a[i] = base[i] + den[i] * k[i];
        if (rels_ok(f, a, tau, eps)) return std::tuple{tau, eps, a};
        size_t i = 0;
        for (; i < r; ++i) {
          if ((k[i] + 1) * den[i] < f.m) {
            ++k[i];
            break;
          }
          k[i] = 0;
        }
        if (i == r) break;
      }
    }
  }
  return std::nullopt;
}

Int crt_pair(const Int& a, const Int& m1, const Int& b, const Int& m2) {
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t()) == 0)
    fail(errc::malformed_input, "moduli not coprime");
  Int k = mod_floor((b - a) * inv, m2);
  return a + m1 * k;
}

// Realize the split character data as one residue: t mod q2 together with a
// prescribed Legendre sign at each free prime.
GaloisMap witness_map(const Frame& f, long tau, unsigned eps) {
  Int t(tau), T(f.q2);
  for (size_t i = 0; i < f.s_primes.size(); ++i) {
    long p = f.s_primes[i];
    long want = 1;
    if (eps >> i & 1u) {
      for (long q = 2; ; ++q)
        if (legendre(q, p) == -1) {
          want = q;
          break;
        }
    }
    t = crt_pair(t, T, Int(want), Int(p));
    T *= p;
  }
  if (!fits_long(T)) fail(errc::bound_exceeded, "witness modulus too large");
  return GaloisMap{to_long(T), to_long(mod_floor(t, T))};
}

void check_tuple(const RadicalTuple& rt) {
  if (rt.denominator < 1)
    fail(errc::shape_mismatch, "denominator must be positive");
  if (rt.twists.size() != rt.bases.size())
    fail(errc::shape_mismatch, "one twist per base");
  for (long tw : rt.twists)
    if (mod_l(tw, 2) != 0)
      fail(errc::shape_mismatch, "odd twist does not name a root");
  for (const auto& b : rt.bases)
    if (b.sign != 1 && b.sign != -1)
      fail(errc::shape_mismatch, "bases must be nonzero");
}

std::vector<long> tuple_phases(const RadicalTuple& rt) {
  std::vector<long> p(rt.bases.size());
  for (size_t i = 0; i < rt.bases.size(); ++i) p[i] = radical_phase(rt, i);
  return p;
}

// Frame for a conjugacy question: the compared coordinates first, then one
// pinned coordinate per fixed radical of the context.
Frame conjugacy_frame(const RadicalTuple& r1, const ConjugacyContext& ctx) {
  std::vector<FrameCoord> coords;
  for (size_t i = 0; i < r1.bases.size(); ++i)
    coords.push_back({r1.bases[i], r1.denominator, 0, false});
  for (const auto& fx : ctx.fixed) {
    check_tuple(fx);
    for (size_t j = 0; j < fx.bases.size(); ++j)
      coords.push_back({fx.bases[j], fx.denominator, radical_phase(fx, j), true});
  }
  return build_frame(std::move(coords), ctx.conductor);
}

// A base-field-valued monomial in the compared coordinates whose phase
// differs between the two tuples.  Exists whenever no conjugating map does.
std::optional<std::vector<long>> find_obstruction(const Frame& f,
                                                  const std::vector<long>& from,
                                                  const std::vector<long>& to,
                                                  long n) {
  const size_t r = from.size();
  if (r == 0) return std::nullopt;
  // collect the group once; bail out rather than overrun
  std::vector<std::tuple<long, std::vector<long>>> elems;
  try {
    for_each_element(f, 200000, [&](long tau, unsigned, const std::vector<long>& a) {
      elems.emplace_back(tau, a);
      return true;
    });
  } catch (const error&) {
    return std::nullopt;
  }
  std::vector<long> c(r, 0);
  while (true) {
    size_t i = 0;
    for (; i < r; ++i) {
      if (c[i] + 1 < 2 * n) {
        ++c[i];
        break;
      }
      c[i] = 0;
    }
    if (i == r) return std::nullopt;
    long gap = 0, pc = 0;
    for (size_t j = 0; j < r; ++j) {
      gap = mod_l(gap + c[j] * (to[j] - from[j]), 2 * n);
      pc = mod_l(pc + c[j] * from[j], 2 * n);
    }
    if (gap == 0) continue;
    bool invariant = true;
    for (const auto& [tau, a] : elems) {
      long move = mod_l(pc * (tau - 1), 2 * n);
      for (size_t j = 0; j < r; ++j)
        move = mod_l(move + 2 * a[j] * c[j], 2 * n);
      if (move != 0) {
        invariant = false;
        break;
      }
    }
    if (invariant) return c;
  }
}

}  // namespace

bool is_simple_in_context(const std::vector<FactoredRational>& t, long M) {
  if (M < 1) fail(errc::malformed_input, "conductor must be positive");
  if (t.size() > 20) fail(errc::budget_exceeded, "tuple too long");
  if (!is_simple_tuple(t).verdict) return false;
  for (unsigned mask = 1; mask < (1u << t.size()); ++mask) {
    FactoredRational prod;
    for (size_t i = 0; i < t.size(); ++i)
      if (mask >> i & 1u) prod = fr_mul(prod, t[i]);
    if (is_qth_power_in_cyclotomic(prod, Int(2), M)) return false;
  }
  return true;
}

Int kummer_degree(const std::vector<FactoredRational>& t, long n, long M) {
  if (n < 1) fail(errc::malformed_input, "root order must be positive");
  if (M < 1) fail(errc::malformed_input, "conductor must be positive");
  if (t.empty()) return Int(1);
  if (!zeta_in(n, M))
    fail(errc::conductor_incompatible,
         "order-" + std::to_string(n) + " roots of unity are not in conductor " +
             std::to_string(M));
  if (!is_simple_in_context(t, M))
    fail(errc::not_simple_in_context,
         "tuple is not simple over the ambient cyclotomic field");
  if (n == 1) return Int(1);

  std::vector<FrameCoord> coords;
  for (const auto& b : t) coords.push_back({b, n, 0, false});
  Frame f = build_frame(std::move(coords), M);
  std::vector<long> ph(t.size());
  for (size_t i = 0; i < t.size(); ++i) ph[i] = (t[i].sign < 0) ? 1 : 0;

  // the degree is the number of Galois images of one fixed root tuple
  std::set<std::vector<long>> images;
  for_each_element(f, 4000000, [&](long tau, unsigned, const std::vector<long>& a) {
    std::vector<long> key(t.size());
    for (size_t i = 0; i < t.size(); ++i)
      key[i] = mod_l(2 * a[i] + ph[i] * tau, 2 * n);
    images.insert(std::move(key));
    return true;
  });
  return Int(static_cast<long>(images.size()));
}

ConjugacyDecision roots_conjugate(const RadicalTuple& r1,
                                  const RadicalTuple& r2,
                                  const ConjugacyContext& ctx) {
  check_tuple(r1);
  check_tuple(r2);
  if (r1.bases != r2.bases || r1.denominator != r2.denominator)
    fail(errc::shape_mismatch, "tuples must name roots of the same bases");

  Frame f = conjugacy_frame(r1, ctx);
  std::vector<long> from = tuple_phases(r1), to = tuple_phases(r2);

  ConjugacyDecision d;
  auto hit = find_map(f, from, to);
  if (hit) {
    auto [tau, eps, a] = *hit;
    d.verdict = true;
    d.witness = witness_map(f, tau, eps);
    d.shifts.resize(r1.bases.size());
    for (size_t i = 0; i < r1.bases.size(); ++i)
      d.shifts[i] = mod_l(a[i], r1.denominator);
  } else {
    d.verdict = false;
    d.obstruction = find_obstruction(f, from, to, r1.denominator);
  }
  return d;
}

std::pair<long, PureHullBasis> stabilizing_m(
    const std::vector<FactoredRational>& b) {
  PureHullBasis hull = pure_hull(b);
  if (b.empty()) return {1, hull};
  ExponentLattice lat = lattice_of_tuple(b);
  std::vector<Int> inv = smith_invariants(lat.rows);
  Int e = inv.empty() ? Int(1) : inv.back();
  return {2 * to_long(e), hull};
}

bool extension_consistent(const std::vector<FactoredRational>& b, long m,
                          long d, const RadicalTuple& choice_m,
                          const RadicalTuple& choice_dm) {
  if (m < 1 || d < 1) fail(errc::malformed_input, "orders must be positive");
  auto bad = [](const char* msg) {
    fail(errc::not_a_compatible_root, msg);
  };
  if (choice_m.bases != b || choice_dm.bases != b)
    bad("choices must name roots of the given tuple");
  if (choice_m.denominator != m || choice_dm.denominator != d * m)
    bad("choice denominators must be m and d*m");
  if (choice_m.twists.size() != b.size() ||
      choice_dm.twists.size() != b.size())
    bad("one twist per base");
  for (size_t i = 0; i < b.size(); ++i)
    if (mod_l(choice_m.twists[i], 2) != 0 || mod_l(choice_dm.twists[i], 2) != 0)
      bad("odd twist does not name a root");
  for (size_t i = 0; i < b.size(); ++i)
    if (mod_l(choice_dm.twists[i] - choice_m.twists[i], 2 * m) != 0)
      bad("d-th power of the finer choice differs from the coarser choice");
  if (d == 1) return true;

  PureHullBasis hull = pure_hull(b);
  long M = std::lcm(hull.conductor, 2 * d * m);

  RadicalTuple ref;
  ref.bases = b;
  ref.denominator = d * m;
  ref.twists.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i)
    ref.twists[i] = mod_l(choice_m.twists[i], 2 * d * m);

  ConjugacyContext cx;
  cx.conductor = M;
  cx.fixed = {choice_m};
  return roots_conjugate(ref, choice_dm, cx).verdict;
}

std::pair<long, CyclotomicElement> radical_value(const FactoredRational& b,
                                                 long den, long twist) {
  if (den != 1 && den != 2)
    fail(errc::bound_exceeded, "only square and trivial roots materialize");
  if (mod_l(twist, 2) != 0)
    fail(errc::malformed_input, "odd twist does not name a root");
  long phase = mod_l(twist + (b.sign < 0 ? 1 : 0), 2 * den);
  if (den == 1) return {1, cyc_rational(to_rational(b))};

  // |b| = u^2 v with v squarefree; the value is u sqrt(v) zeta_4^phase
  FactoredRational kern;
  Rat u(1);
  for (const auto& [p, e] : b.exponents) {
    Int w = mod_floor(e, Int(2));
    if (w == 1) kern.exponents[p] = 1;
    Int q = divexact(e - w, Int(2));
    Rat pw(p);
    if (q < 0) {
      pw = Rat(1) / pw;
      q = -q;
    }
    for (Int i = 0; i < q; ++i) u *= pw;
  }
  auto [f0, w] = sqrt_in_cyclotomic(kern);
  long L = std::lcm(f0, 4L);
  CyclotomicElement val = embed(w, L) * cyc_rational(u, L);
  if (phase != 0) val = val * zeta_pow(L, phase * (L / 4));
  return {L, val};
}

}  // namespace mulcov

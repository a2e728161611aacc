#include "mulcov/cover.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mulcov/cyclotomic.hpp"
#include "mulcov/errors.hpp"
#include "mulcov/lattice.hpp"
#include "mulcov/primes.hpp"
#include "mulcov/zhat.hpp"

namespace mulcov {

namespace {

// q reduced into [0, 1).
Rat rat_frac(const Rat& q) {
  Rat r = q - Rat(fdiv_q(Int(q.get_num()), Int(q.get_den())));
  r.canonicalize();
  return r;
}

long den_as_long(const Rat& q) {
  Int d(q.get_den());
  if (!fits_long(d))
    fail(errc::bound_exceeded, "denominator does not fit a machine word");
  return to_long(d);
}

// q must be integral; the failure code is the caller's context.
long as_integer(const Rat& q, errc code, const char* what) {
  Rat r = q;
  r.canonicalize();
  if (r.get_den() != 1) fail(code, what);
  Int n(r.get_num());
  if (!fits_long(n)) fail(errc::bound_exceeded, what);
  return to_long(n);
}

Rat rat_prime_pow(const Int& p, const Int& k) {
  if (k == 0) return Rat(1);
  Int a = iabs(k);
  if (!fits_long(a)) fail(errc::bound_exceeded, "exponent does not fit");
  Int pw;
  mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(),
             static_cast<unsigned long>(to_long(a)));
  return k > 0 ? Rat(pw) : make_rat(Int(1), pw);
}

void check_value(const CoverValue& v) {
  for (const auto& [p, e] : v.radicand) {
    if (p < 2 || !is_prime(p))
      fail(errc::malformed_input, "radicand index is not a prime");
    if (e == 0) fail(errc::malformed_input, "zero exponent in a radicand");
  }
  for (const auto& [s, e] : v.symbols) {
    if (s.empty()) fail(errc::malformed_input, "empty symbol name");
    if (e == 0) fail(errc::malformed_input, "zero exponent on a symbol");
  }
  if (v.zeta < 0 || v.zeta >= 1)
    fail(errc::malformed_input, "phase not reduced into [0, 1)");
}

void check_root_entry(const CoverPresentation& p, const std::string& g, long d,
                      const CoverValue& v) {
  if (!p.values.count(g))
    fail(errc::malformed_input, "root committed for unknown generator " + g);
  if (d < 1) fail(errc::malformed_input, "root denominator must be positive");
  check_value(v);
  if (!(cv_pow(v, Rat(d)) == p.values.at(g)))
    fail(errc::not_a_compatible_root,
         "committed value is not a " + std::to_string(d) + "-th root of " + g);
}

void validate_presentation(const CoverPresentation& p) {
  if (p.generators.empty())
    fail(errc::malformed_input, "presentation has no generators");
  std::set<std::string> names(p.generators.begin(), p.generators.end());
  if (names.size() != p.generators.size())
    fail(errc::malformed_input, "duplicate generator name");
  if (!names.count(p.kernel))
    fail(errc::malformed_input, "kernel is not a listed generator");
  if (p.kernel_scale < 1)
    fail(errc::malformed_input, "kernel scale must be positive");
  if (p.values.count(p.kernel))
    fail(errc::malformed_input, "kernel carries a table value");
  for (const auto& g : p.generators)
    if (g != p.kernel && !p.values.count(g))
      fail(errc::malformed_input, "generator " + g + " has no value");
  if (p.values.size() + 1 != p.generators.size())
    fail(errc::malformed_input, "value for an unlisted generator");
  for (const auto& [g, v] : p.values) {
    check_value(v);
    if (v.is_torsion())
      fail(errc::not_independent,
           "value of " + g + " is torsion, so the kernel is not exact");
  }

  // Exact kernel: ex must kill only the kernel line, which holds iff the
  // value exponent rows over primes and symbols are Q-independent.
  long k = static_cast<long>(p.values.size());
  if (k > 0) {
    std::set<Int> ps;
    std::set<std::string> ss;
    Int d(1);
    for (const auto& [g, v] : p.values) {
      for (const auto& [pp, e] : v.radicand) {
        ps.insert(pp);
        d = lcm(d, Int(e.get_den()));
      }
      for (const auto& [s, e] : v.symbols) {
        ss.insert(s);
        d = lcm(d, Int(e.get_den()));
      }
    }
    std::vector<Int> pv(ps.begin(), ps.end());
    std::vector<std::string> sv(ss.begin(), ss.end());
    IntMat rows(k, static_cast<long>(pv.size() + sv.size()));
    rows.setZero();
    long i = 0;
    for (const auto& g : p.generators) {
      if (g == p.kernel) continue;
      const CoverValue& v = p.values.at(g);
      for (const auto& [pp, e] : v.radicand) {
        long j = std::lower_bound(pv.begin(), pv.end(), pp) - pv.begin();
        Rat t = e * Rat(d);
        t.canonicalize();
        rows(i, j) = Int(t.get_num());
      }
      for (const auto& [s, e] : v.symbols) {
        long j = static_cast<long>(pv.size()) +
                 (std::lower_bound(sv.begin(), sv.end(), s) - sv.begin());
        Rat t = e * Rat(d);
        t.canonicalize();
        rows(i, j) = Int(t.get_num());
      }
      ++i;
    }
    if (rank(rows) != k)
      fail(errc::not_independent,
           "generator values are multiplicatively dependent modulo torsion");
  }

  for (const auto& [key, v] : p.roots) check_root_entry(p, key.first, key.second, v);
  for (const auto& [k1, v1] : p.roots)
    for (const auto& [k2, v2] : p.roots) {
      if (k1.first != k2.first || k2.second <= k1.second) continue;
      long g = std::gcd(k1.second, k2.second);
      if (!(cv_pow(v1, Rat(k1.second / g)) == cv_pow(v2, Rat(k2.second / g))))
        fail(errc::not_a_compatible_root,
             "committed roots of " + k1.first + " disagree at denominators " +
                 std::to_string(k1.second) + " and " + std::to_string(k2.second));
    }
}

// The committed d-th root of a non-kernel generator, derived and recorded
// when absent.  Derivation lifts the level-1 value canonically to the lcm
// of d and the committed denominators, corrects the phase by the unique
// residue matching every commitment, and powers back down to d.
CoverValue root_at(CoverPresentation& p, const std::string& name, long d) {
  if (d < 1) fail(errc::malformed_input, "root denominator must be positive");
  const CoverValue& base = p.values.at(name);
  if (d == 1) return base;
  if (auto it = p.roots.find({name, d}); it != p.roots.end()) return it->second;

  long big = d;
  std::vector<std::pair<long, const CoverValue*>> committed;
  for (const auto& [key, v] : p.roots) {
    if (key.first != name) continue;
    committed.push_back({key.second, &v});
    Int l = lcm(Int(big), Int(key.second));
    if (!fits_long(l) || to_long(l) > 1000000)
      fail(errc::bound_exceeded, "root denominators grow past the working bound");
    big = to_long(l);
  }
  CoverValue lift = cv_pow(base, make_rat(1, big));
  CongruenceSystem sys;
  for (const auto& [dd, vv] : committed) {
    CoverValue q = cv_mul(*vv, cv_inv(cv_pow(lift, Rat(big / dd))));
    if (!q.is_torsion())
      fail(errc::not_a_compatible_root,
           "committed root of " + name + " does not sit over its value");
    long t = as_integer(q.zeta * Rat(dd), errc::not_a_compatible_root,
                        "committed roots are incoherent");
    sys.constraints.push_back({dd, t});
  }
  long c = 0;
  if (!sys.constraints.empty()) {
    ZhatApprox z = crt_solve(sys);
    c = z.residues.at(zhat_level(z));
  }
  CoverValue big_root = cv_mul(lift, cv_root_of_unity(make_rat(c, big)));
  CoverValue out = big == d ? big_root : cv_pow(big_root, Rat(big / d));
  p.roots[{name, d}] = out;
  p.denominator_bound = std::max(p.denominator_bound, d);
  return p.roots.at({name, d});
}

void check_transcendental_shapes(const CoverPresentation& p) {
  std::map<std::string, int> uses;
  for (const auto& [g, v] : p.values) {
    (void)g;
    for (const auto& [s, e] : v.symbols) {
      (void)e;
      uses[s] += 1;
    }
  }
  for (const auto& [g, v] : p.values) {
    if (!v.is_transcendental()) continue;
    bool fresh = v.radicand.empty() && v.zeta == 0 && v.symbols.size() == 1 &&
                 v.symbols.begin()->second == 1 &&
                 uses[v.symbols.begin()->first] == 1;
    if (!fresh)
      fail(errc::unsupported_value_shape,
           "transcendental generator " + g + " must carry a fresh symbol");
  }
}

// Mapped algebraic domain generators in generator order.
std::vector<std::string> mapped_algebraic(const PartialIso& iso) {
  std::vector<std::string> out;
  for (const auto& g : iso.domain.generators) {
    if (g == iso.domain.kernel || !iso.linear_map.count(g)) continue;
    if (iso.domain.values.at(g).is_transcendental()) continue;
    out.push_back(g);
  }
  return out;
}

// Root system of the named generators at denominator big, the phase of
// coordinate i shifted by shifts[i] kernel units.
RadicalTuple table_tuple(CoverPresentation& p,
                         const std::vector<std::string>& names,
                         const std::vector<FactoredRational>& bases, long big,
                         const std::vector<long>& shifts) {
  RadicalTuple r;
  r.bases = bases;
  r.denominator = big;
  long two_l = 2 * big;
  for (size_t i = 0; i < names.size(); ++i) {
    CoverValue root = root_at(p, names[i], big);
    long phase = as_integer(root.zeta * Rat(two_l), errc::unsupported_value_shape,
                            "root phase does not live at this level");
    long s = bases[i].sign < 0 ? 1 : 0;
    long tw = (phase - s + 2 * shifts[i] * p.kernel_scale) % two_l;
    r.twists.push_back((tw + two_l) % two_l);
  }
  return r;
}

// Certification level for a tuple of generators: the stabilizing
// denominator of the bases joined with every committed denominator of the
// involved generators on the given side.
long fold_committed(const CoverPresentation& p,
                    const std::vector<std::string>& names, long level) {
  for (const auto& [key, v] : p.roots) {
    (void)v;
    if (std::find(names.begin(), names.end(), key.first) == names.end())
      continue;
    Int l = lcm(Int(level), Int(key.second));
    if (!fits_long(l) || to_long(l) > 1000000)
      fail(errc::bound_exceeded, "certification level grows past the working bound");
    level = to_long(l);
  }
  return level;
}

}  // namespace

CoverValue cv_one() { return CoverValue{}; }

CoverValue cv_rational(const FactoredRational& q) {
  CoverValue v;
  for (const auto& [p, e] : q.exponents) v.radicand[p] = Rat(e);
  if (q.sign < 0) v.zeta = make_rat(1, 2);
  return v;
}

CoverValue cv_root_of_unity(const Rat& q) {
  CoverValue v;
  v.zeta = rat_frac(q);
  return v;
}

CoverValue cv_symbol(const std::string& name) {
  if (name.empty()) fail(errc::malformed_input, "empty symbol name");
  CoverValue v;
  v.symbols[name] = Rat(1);
  return v;
}

CoverValue cv_mul(const CoverValue& a, const CoverValue& b) {
  CoverValue v = a;
  for (const auto& [p, e] : b.radicand) {
    Rat s = v.radicand[p] + e;
    s.canonicalize();
    if (s == 0)
      v.radicand.erase(p);
    else
      v.radicand[p] = s;
  }
  for (const auto& [name, e] : b.symbols) {
    Rat s = v.symbols[name] + e;
    s.canonicalize();
    if (s == 0)
      v.symbols.erase(name);
    else
      v.symbols[name] = s;
  }
  v.zeta = rat_frac(v.zeta + b.zeta);
  return v;
}

CoverValue cv_inv(const CoverValue& a) { return cv_pow(a, Rat(-1)); }

CoverValue cv_pow(const CoverValue& a, const Rat& e) {
  Rat ee = e;
  ee.canonicalize();
  if (ee == 0) return cv_one();
  CoverValue v;
  for (const auto& [p, x] : a.radicand) {
    Rat y = x * ee;
    y.canonicalize();
    v.radicand[p] = y;
  }
  for (const auto& [name, x] : a.symbols) {
    Rat y = x * ee;
    y.canonicalize();
    v.symbols[name] = y;
  }
  v.zeta = rat_frac(a.zeta * ee);
  return v;
}

FactoredRational cv_to_rational(const CoverValue& v) {
  if (!v.symbols.empty())
    fail(errc::unsupported_value_shape, "value has a formal part");
  FactoredRational f;
  for (const auto& [p, e] : v.radicand) {
    if (e.get_den() != 1)
      fail(errc::unsupported_value_shape, "value is a proper radical");
    f.exponents[p] = Int(e.get_num());
  }
  if (v.zeta == make_rat(1, 2))
    f.sign = -1;
  else if (v.zeta != 0)
    fail(errc::unsupported_value_shape, "phase is not rational");
  return f;
}

HElem h_unit(const std::string& name, const Rat& c) {
  HElem v;
  Rat cc = c;
  cc.canonicalize();
  if (cc != 0) v[name] = cc;
  return v;
}

HElem h_add(const HElem& a, const HElem& b) {
  HElem v = a;
  for (const auto& [n, c] : b) {
    Rat s = v[n] + c;
    s.canonicalize();
    if (s == 0)
      v.erase(n);
    else
      v[n] = s;
  }
  return v;
}

HElem h_sub(const HElem& a, const HElem& b) {
  return h_add(a, h_scale(Rat(-1), b));
}

HElem h_scale(const Rat& c, const HElem& a) {
  HElem v;
  if (c == 0) return v;
  for (const auto& [n, x] : a) {
    Rat y = c * x;
    y.canonicalize();
    v[n] = y;
  }
  return v;
}

CoverPresentation make_presentation(std::vector<std::string> generators,
                                    std::string kernel,
                                    std::map<std::string, CoverValue> values,
                                    long kernel_scale) {
  CoverPresentation p;
  p.generators = std::move(generators);
  p.kernel = std::move(kernel);
  p.values = std::move(values);
  p.kernel_scale = kernel_scale;
  validate_presentation(p);
  return p;
}

void commit_root(CoverPresentation& p, const std::string& name, long d,
                 const CoverValue& value) {
  if (name == p.kernel)
    fail(errc::malformed_input, "kernel roots are canonical, not committed");
  check_root_entry(p, name, d, value);
  if (d == 1) return;
  if (auto it = p.roots.find({name, d}); it != p.roots.end()) {
    if (it->second == value) return;
    fail(errc::not_a_compatible_root,
         "a different root of " + name + " is already committed at denominator " +
             std::to_string(d));
  }
  for (const auto& [key, v] : p.roots) {
    if (key.first != name) continue;
    long g = std::gcd(d, key.second);
    if (!(cv_pow(value, Rat(d / g)) == cv_pow(v, Rat(key.second / g))))
      fail(errc::not_a_compatible_root,
           "incoherent with the root committed at denominator " +
               std::to_string(key.second));
  }
  p.roots[{name, d}] = value;
  p.denominator_bound = std::max(p.denominator_bound, d);
}

void materialize_mu(CoverPresentation& p, long n) {
  if (n < 1) fail(errc::malformed_input, "torsion level must be positive");
  p.explicit_mu = std::lcm(p.explicit_mu, n);
}

long mu_order(const CoverPresentation& p) {
  long mu = std::lcm(2L, p.explicit_mu);
  std::vector<const CoverValue*> vs;
  for (const auto& [g, v] : p.values) {
    (void)g;
    vs.push_back(&v);
  }
  for (const auto& [k, v] : p.roots) {
    (void)k;
    vs.push_back(&v);
  }
  long k = static_cast<long>(vs.size());
  if (k == 0) return mu;

  // Torsion of the group generated with Q*: combinations whose prime
  // exponents are integral and whose symbol exponents vanish; the extra
  // torsion is generated by the phases over that combination lattice.
  std::set<Int> ps;
  std::set<std::string> ss;
  Int d(1);
  for (const auto* v : vs) {
    for (const auto& [pp, e] : v->radicand) {
      ps.insert(pp);
      d = lcm(d, Int(e.get_den()));
    }
    for (const auto& [s, e] : v->symbols) {
      ss.insert(s);
      d = lcm(d, Int(e.get_den()));
    }
  }
  std::vector<Int> pv(ps.begin(), ps.end());
  std::vector<std::string> sv(ss.begin(), ss.end());
  long np = static_cast<long>(pv.size());
  long ns = static_cast<long>(sv.size());
  IntMat cond(np + ns, k + np);
  cond.setZero();
  for (long j = 0; j < k; ++j) {
    for (const auto& [pp, e] : vs[j]->radicand) {
      long i = std::lower_bound(pv.begin(), pv.end(), pp) - pv.begin();
      Rat t = e * Rat(d);
      t.canonicalize();
      cond(i, j) = Int(t.get_num());
    }
    for (const auto& [s, e] : vs[j]->symbols) {
      long i = np + (std::lower_bound(sv.begin(), sv.end(), s) - sv.begin());
      Rat t = e * Rat(d);
      t.canonicalize();
      cond(i, j) = Int(t.get_num());
    }
  }
  for (long i = 0; i < np; ++i) cond(i, k + i) = d;
  IntMat ker = col_kernel(cond);
  for (long r = 0; r < ker.rows(); ++r) {
    Rat z(0);
    for (long j = 0; j < k; ++j) z += Rat(ker(r, j)) * vs[j]->zeta;
    z = rat_frac(z);
    mu = std::lcm(mu, den_as_long(z));
  }
  return mu;
}

CoverValue eval_ex(CoverPresentation& p, const HElem& v, long budget) {
  CoverValue out = cv_one();
  for (const auto& [name, q0] : v) {
    Rat q = q0;
    q.canonicalize();
    if (q == 0) continue;
    long den = den_as_long(q);
    if (den > budget)
      fail(errc::budget_exceeded, "coordinate denominator " +
                                      std::to_string(den) +
                                      " exceeds the budget");
    if (name == p.kernel) {
      // Kernel section: ex(q kernel) = e(q scale) for every rational q.
      // Evaluating a proper fraction materializes that root of unity.
      Rat ph = q * Rat(p.kernel_scale);
      ph.canonicalize();
      if (ph.get_den() != 1)
        p.explicit_mu = std::lcm(p.explicit_mu, den_as_long(ph));
      out = cv_mul(out, cv_root_of_unity(ph));
      continue;
    }
    if (!p.values.count(name))
      fail(errc::malformed_input, "unknown generator " + name);
    Int num(q.get_num());
    if (!fits_long(num))
      fail(errc::bound_exceeded, "coordinate numerator does not fit");
    out = cv_mul(out, cv_pow(root_at(p, name, den), Rat(num)));
  }
  return out;
}

bool relation_E(const CoverPresentation& p, const HElem& h1, const HElem& h2) {
  for (const HElem* h : {&h1, &h2})
    for (const auto& [name, c] : *h) {
      (void)c;
      if (name != p.kernel && !p.values.count(name))
        fail(errc::malformed_input, "unknown generator " + name);
    }
  HElem d = h_sub(h1, h2);
  for (const auto& [name, c] : d) {
    if (name != p.kernel) return false;
    Rat cc = c;
    cc.canonicalize();
    if (cc.get_den() != 1) return false;
  }
  return true;
}

bool relation_S(CoverPresentation& p, const HElem& h1, const HElem& h2,
                const HElem& h3, long budget) {
  CoverValue a = eval_ex(p, h1, budget);
  CoverValue b = eval_ex(p, h2, budget);
  CoverValue c = eval_ex(p, h3, budget);
  struct Part {
    Rat q = Rat(1);
    FactoredRational s;
    Rat z;
    long f = 1;
    CyclotomicElement w;
  };
  Part parts[3];
  const CoverValue* vals[3] = {&a, &b, &c};
  long level = 4;
  for (int i = 0; i < 3; ++i) {
    const CoverValue& v = *vals[i];
    if (v.is_transcendental())
      fail(errc::transcendental_addition,
           "additive relations are undefined on formal values");
    Part& pt = parts[i];
    for (const auto& [pp, e] : v.radicand) {
      if (e.get_den() > 2)
        fail(errc::unsupported_value_shape,
             "radical of denominator " + std::to_string(den_as_long(e)) +
                 " falls outside the quadratic range");
      if (e.get_den() == 1) {
        pt.q *= rat_prime_pow(pp, Int(e.get_num()));
      } else {
        Int h = mod_floor(Int(e.get_num()), Int(2));
        pt.q *= rat_prime_pow(pp, divexact(Int(e.get_num()) - h, Int(2)));
        if (h != 0) pt.s.exponents[pp] = 1;
      }
    }
    pt.q.canonicalize();
    pt.z = v.zeta;
    auto [f, w] = radical_value(pt.s, 2, 0);
    pt.f = f;
    pt.w = w;
    Int l = lcm(lcm(Int(level), Int(pt.f)), Int(pt.z.get_den()));
    if (!fits_long(l) || to_long(l) > kConductorBound)
      fail(errc::bound_exceeded, "conductor needed exceeds the bound");
    level = to_long(l);
  }
  CyclotomicElement side[3];
  for (int i = 0; i < 3; ++i) {
    Part& pt = parts[i];
    long e = as_integer(pt.z * Rat(level), errc::bound_exceeded, "phase level");
    side[i] = embed(pt.w, level) * cyc_rational(pt.q, level);
    if (e != 0) side[i] = side[i] * zeta_pow(level, e);
  }
  return side[0] + side[1] == side[2];
}

PartialIso begin_iso(const CoverPresentation& p1, const CoverPresentation& p2) {
  validate_presentation(p1);
  validate_presentation(p2);
  if (p1.generators.size() != p2.generators.size())
    fail(errc::signature_mismatch, "generator counts differ");
  if (p1.kernel_scale != p2.kernel_scale)
    fail(errc::signature_mismatch,
         "declared kernel elements differ by a proper multiple");
  check_transcendental_shapes(p1);
  check_transcendental_shapes(p2);
  PartialIso iso;
  iso.domain = p1;
  iso.codomain = p2;
  std::set<std::string> taken;
  for (const auto& g : p1.generators) {
    if (g == p1.kernel) continue;
    const CoverValue& v = p1.values.at(g);
    std::string match;
    for (const auto& h : p2.generators) {
      if (h == p2.kernel || taken.count(h)) continue;
      const CoverValue& w = p2.values.at(h);
      bool ok = v.is_transcendental() ? w.is_transcendental() : v == w;
      if (ok) {
        match = h;
        break;
      }
    }
    if (match.empty())
      fail(errc::signature_mismatch,
           "no unclaimed partner matches the value of " + g);
    taken.insert(match);
    iso.pairing[g] = match;
  }
  iso.linear_map[p1.kernel] = h_unit(p2.kernel);
  return iso;
}

void backforth_extend(PartialIso& iso, const std::string& h_new, long budget) {
  auto pit = iso.pairing.find(h_new);
  if (pit == iso.pairing.end())
    fail(errc::malformed_input, "generator " + h_new + " is not paired");
  if (iso.linear_map.count(h_new)) return;
  const std::string& partner = pit->second;
  const CoverValue& val = iso.domain.values.at(h_new);
  if (val.is_transcendental()) {
    iso.linear_map[h_new] = h_unit(partner);
    return;
  }

  // Certify the committed prefix with the new generator appended, at the
  // stabilizing denominator of the bases joined with every committed
  // denominator on either side.  Beyond that level further root choices
  // are free, so a shift that works here keeps working.
  std::vector<std::string> names = mapped_algebraic(iso);
  names.push_back(h_new);
  std::vector<std::string> conames;
  std::vector<FactoredRational> bases;
  std::vector<long> shifts;
  for (const auto& g : names) {
    conames.push_back(iso.pairing.at(g));
    bases.push_back(cv_to_rational(iso.domain.values.at(g)));
    if (g == h_new) {
      shifts.push_back(0);
      continue;
    }
    const HElem& img = iso.linear_map.at(g);
    auto it = img.find(iso.codomain.kernel);
    shifts.push_back(
        it == img.end()
            ? 0
            : as_integer(it->second, errc::malformed_input, "kernel shift"));
  }
  long level = stabilizing_m(bases).first;
  level = fold_committed(iso.domain, names, level);
  level = fold_committed(iso.codomain, conames, level);
  if (level > budget)
    fail(errc::budget_exceeded, "certification denominator " +
                                    std::to_string(level) +
                                    " exceeds the budget");
  ConjugacyContext ctx;
  ctx.conductor = std::lcm(mu_order(iso.domain), mu_order(iso.codomain));
  RadicalTuple dom = table_tuple(iso.domain, names, bases, level,
                                 std::vector<long>(names.size(), 0));
  long span = level / std::gcd(iso.codomain.kernel_scale, level);
  for (long z = 0; z < span; ++z) {
    shifts.back() = z;
    RadicalTuple cod = table_tuple(iso.codomain, conames, bases, level, shifts);
    if (roots_conjugate(dom, cod, ctx).verdict) {
      HElem img = h_unit(partner);
      if (z != 0) img[iso.codomain.kernel] = Rat(z);
      iso.linear_map[h_new] = img;
      return;
    }
  }
  fail(errc::no_conjugate_choice,
       "no kernel shift makes " + h_new + " and " + partner + " conjugate");
}

PartialIso build_isomorphism(const CoverPresentation& p1,
                             const CoverPresentation& p2, long budget) {
  PartialIso iso = begin_iso(p1, p2);
  for (const auto& g : iso.domain.generators) {
    if (g == iso.domain.kernel) continue;
    backforth_extend(iso, g, budget);
  }
  if (!verify_iso(iso, budget))
    fail(errc::no_conjugate_choice, "assembled map fails re-verification");
  return iso;
}

HElem apply_linear(const PartialIso& iso, const HElem& v) {
  HElem out;
  for (const auto& [name, c] : v) {
    auto it = iso.linear_map.find(name);
    if (it == iso.linear_map.end())
      fail(errc::malformed_input, "generator " + name + " has no committed image");
    out = h_add(out, h_scale(c, it->second));
  }
  return out;
}

bool verify_iso(PartialIso& iso, long budget) {
  validate_presentation(iso.domain);
  validate_presentation(iso.codomain);
  if (iso.domain.kernel_scale != iso.codomain.kernel_scale) return false;
  if (iso.domain.generators.size() != iso.codomain.generators.size())
    return false;
  auto kit = iso.linear_map.find(iso.domain.kernel);
  if (kit == iso.linear_map.end()) return false;
  if (!(kit->second == h_unit(iso.codomain.kernel))) return false;

  std::set<std::string> used;
  std::vector<std::string> names, conames;
  std::vector<FactoredRational> bases;
  std::vector<long> shifts;
  for (const auto& g : iso.domain.generators) {
    if (g == iso.domain.kernel) continue;
    auto it = iso.linear_map.find(g);
    if (it == iso.linear_map.end()) return false;
    auto pit = iso.pairing.find(g);
    if (pit == iso.pairing.end()) return false;
    const std::string& partner = pit->second;
    if (partner == iso.codomain.kernel || !iso.codomain.values.count(partner))
      return false;
    if (!used.insert(partner).second) return false;

    // The image must be the partner plus an integer kernel shift.
    long z = 0;
    bool has_partner = false;
    for (const auto& [n, c] : it->second) {
      if (n == partner) {
        if (c != 1) return false;
        has_partner = true;
      } else if (n == iso.codomain.kernel) {
        Rat cc = c;
        cc.canonicalize();
        if (cc.get_den() != 1 || !fits_long(Int(cc.get_num()))) return false;
        z = to_long(Int(cc.get_num()));
      } else {
        return false;
      }
    }
    if (!has_partner) return false;
    const CoverValue& v = iso.domain.values.at(g);
    const CoverValue& w = iso.codomain.values.at(partner);
    if (v.is_transcendental()) {
      if (!w.is_transcendental() || z != 0) return false;
      continue;
    }
    if (!(v == w)) return false;
    names.push_back(g);
    conames.push_back(partner);
    bases.push_back(cv_to_rational(v));
    shifts.push_back(z);
  }

  if (!names.empty()) {
    long level = stabilizing_m(bases).first;
    level = fold_committed(iso.domain, names, level);
    level = fold_committed(iso.codomain, conames, level);
    if (level > budget)
      fail(errc::budget_exceeded, "certification denominator " +
                                      std::to_string(level) +
                                      " exceeds the budget");
    ConjugacyContext ctx;
    ctx.conductor = std::lcm(mu_order(iso.domain), mu_order(iso.codomain));
    RadicalTuple dom = table_tuple(iso.domain, names, bases, level,
                                   std::vector<long>(names.size(), 0));
    RadicalTuple cod = table_tuple(iso.codomain, conames, bases, level, shifts);
    if (!roots_conjugate(dom, cod, ctx).verdict) return false;
  }

  // ex commutes with the mapping on the algebraic generators themselves;
  // formal values rename their symbol, so they carry nothing to compare.
  for (const auto& g : names) {
    CoverValue lhs = eval_ex(iso.domain, h_unit(g), budget);
    CoverValue rhs = eval_ex(iso.codomain, apply_linear(iso, h_unit(g)), budget);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

}  // namespace mulcov

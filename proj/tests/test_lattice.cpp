#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mulcov/errors.hpp"
#include "mulcov/lattice.hpp"
#include "oracles.hpp"

using namespace mulcov;

namespace {

IntMat mat(std::initializer_list<std::initializer_list<long>> rows) {
  long r = rows.size();
  long c = r ? rows.begin()->size() : 0;
  IntMat m(r, c);
  long i = 0;
  for (auto& row : rows) {
    long j = 0;
    for (long x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

IntVec vec(std::initializer_list<long> xs) {
  IntVec v(xs.size());
  long i = 0;
  for (long x : xs) v(i++) = x;
  return v;
}

ExponentLattice lat(std::initializer_list<std::initializer_list<long>> rows,
                    std::initializer_list<long> primes) {
  ExponentLattice l;
  for (long p : primes) l.support.push_back(Atom(Int(p)));
  l.rows = mat(rows);
  return l;
}

FactoredRational fr(long num, long den = 1) {
  return factor(Rat(num, den));
}

bool hnf_shape_ok(const IntMat& h) {
  long prev_piv = -1;
  for (long i = 0; i < h.rows(); ++i) {
    long piv = h.cols() - 1;
    while (piv >= 0 && h(i, piv) == 0) --piv;
    if (piv <= prev_piv) return false;
    if (h(i, piv) <= 0) return false;
    for (long k = i + 1; k < h.rows(); ++k)
      if (h(k, piv) < 0 || h(k, piv) >= h(i, piv)) return false;
    prev_piv = piv;
  }
  return true;
}

IntMat random_mat(std::mt19937_64& rng, long r, long c, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  IntMat m(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("lower hnf shape and row space") {
  std::mt19937_64 rng(12345);
  for (int iter = 0; iter < 200; ++iter) {
    long r = 1 + iter % 3, c = 1 + (iter / 3) % 4;
    IntMat a = random_mat(rng, r, c, 5);
    IntMat h = lower_hnf(a);
    CHECK(hnf_shape_ok(h));
    // same row space: each generator reduces to zero against the other basis
    for (long i = 0; i < a.rows(); ++i)
      CHECK(solve_in_rows(h, a.row(i).transpose()).has_value());
    IntMat h2 = lower_hnf(h);
    CHECK(h2 == h);
  }
}

TEST_CASE("hnf invariant under row operations") {
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 100; ++iter) {
    IntMat a = random_mat(rng, 3, 3, 4);
    IntMat b = a;
    b.row(0) += 3 * b.row(1);
    b.row(2).swap(b.row(1));
    b.row(2) = -b.row(2);
    CHECK(lower_hnf(a) == lower_hnf(b));
  }
}

TEST_CASE("smith decomposition against minor gcd oracle") {
  std::mt19937_64 rng(999);
  for (int iter = 0; iter < 300; ++iter) {
    long r = 1 + iter % 3, c = 1 + (iter / 3) % 3;
    IntMat a = random_mat(rng, r, c, 6);
    SmithDecomposition d = smith(a);
    CHECK(d.u * a * d.v == d.s);
    CHECK(iabs(abs_det(d.u)) == 1);
    CHECK(iabs(abs_det(d.v)) == 1);
    std::vector<Int> inv;
    for (long i = 0; i < std::min(d.s.rows(), d.s.cols()); ++i)
      if (d.s(i, i) != 0) inv.push_back(d.s(i, i));
    for (size_t i = 0; i + 1 < inv.size(); ++i)
      CHECK(mod_floor(inv[i + 1], inv[i]) == 0);
    CHECK(inv == oracle::invariants_by_minors(a));
  }
}

TEST_CASE("smith invariants frozen examples") {
  CHECK(smith_invariants(mat({{2, 0}, {0, 2}})) == std::vector<Int>{2, 2});
  CHECK(smith_invariants(mat({{2, 4}})) == std::vector<Int>{2});
  CHECK(smith_invariants(mat({{1, 0}, {1, 1}})) == std::vector<Int>{1, 1});
}

TEST_CASE("saturation matches brute box scan") {
  std::mt19937_64 rng(4242);
  for (int iter = 0; iter < 60; ++iter) {
    long r = 1 + iter % 2, c = 2 + iter % 2;
    IntMat a = random_mat(rng, r, c, 3);
    IntMat sat = saturate_rows(a);
    CHECK(hnf_shape_ok(sat));
    // membership in the saturation on a box, against the definition
    oracle::box_vectors(c, 2, [&](const IntVec& v) {
      bool claimed = solve_in_rows(sat, v).has_value();
      bool brute = false;
      for (long k = 1; k <= 6 && !brute; ++k)
        brute = oracle::in_rowspan_boxed(a, (Int(k) * v).eval(), 12);
      if (brute) CHECK(claimed);
      if (!claimed) CHECK(!brute);
    });
  }
}

TEST_CASE("saturate frozen examples") {
  ExponentLattice l1 = lat({{2, 0}, {0, 2}}, {2, 3});
  CHECK(saturate(l1).rows == mat({{1, 0}, {0, 1}}));
  ExponentLattice l2 = lat({{2, 4}}, {2, 3});
  CHECK(saturate(l2).rows == mat({{1, 2}}));
}

TEST_CASE("normal form diagonal and hnf") {
  ExponentLattice l = lat({{2, 0}, {0, 2}}, {2, 3});
  NormalForm nf = normal_form(l);
  CHECK(nf.snf_diagonal == std::vector<Int>{2, 2});
  CHECK(nf.hnf.rows == mat({{2, 0}, {0, 2}}));
  NormalForm nf2 = normal_form(lat({{2, 4}}, {2, 3}));
  CHECK(nf2.snf_diagonal == std::vector<Int>{2});
}

TEST_CASE("member examples and verification") {
  ExponentLattice l = lat({{1, 2}}, {2, 3});
  auto c1 = member(l, l.support, vec({2, 4}));
  REQUIRE(c1.has_value());
  CHECK((*c1)(0) == 2);
  CHECK(!member(l, l.support, vec({1, 1})).has_value());
  // coordinates reproduce the vector exactly
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 100; ++iter) {
    IntMat a = random_mat(rng, 2, 3, 4);
    IntMat h = lower_hnf(a);
    oracle::box_vectors(3, 3, [&](const IntVec& v) {
      auto c = solve_in_rows(h, v);
      if (c) {
        IntVec w = IntVec::Zero(3);
        for (long i = 0; i < h.rows(); ++i) w += ((*c)(i) * h.row(i)).transpose();
        CHECK(w == v);
      } else {
        CHECK(!oracle::in_rowspan_boxed(h, v, 10));
      }
    });
  }
}

TEST_CASE("member support alignment") {
  ExponentLattice l = lat({{1, 2}}, {2, 3});
  std::vector<Atom> sup5{Atom(Int(2)), Atom(Int(3)), Atom(Int(5))};
  CHECK(member(l, sup5, vec({1, 2, 0})).has_value());
  CHECK_THROWS_AS((void)member(l, sup5, vec({1, 2, 1})), error);
}

TEST_CASE("independence examples") {
  CHECK(is_mult_independent({fr(2), fr(3), fr(5)}));
  CHECK(!is_mult_independent({fr(2), fr(8)}));
  CHECK(!is_mult_independent({fr(-1)}));
  CHECK(is_mult_independent({}));
  CHECK(is_mult_independent({fr(-2)}));
  // brute relation search agrees on random small tuples
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<FactoredRational> t;
    long r = 1 + iter % 3;
    for (long i = 0; i < r; ++i) {
      Rat q = oracle::random_rat(rng, 10, true);
      t.push_back(factor(q));
    }
    bool indep = is_mult_independent(t);
    bool relation = false;
    oracle::box_vectors(r, 4, [&](const IntVec& c) {
      if (relation || c == IntVec::Zero(r)) return;
      FactoredRational prod;
      for (long i = 0; i < r; ++i) prod = fr_mul(prod, fr_pow(t[i], c(i)));
      if (prod.is_one()) relation = true;
    });
    if (relation) CHECK(!indep);
    // independence implies no relation anywhere, in particular in the box
    if (indep) CHECK(!relation);
  }
}

TEST_CASE("group index examples") {
  ExponentLattice z2 = lat({{1, 0}, {0, 1}}, {2, 3});
  CHECK(group_index(lat({{2, 0}, {0, 2}}, {2, 3}), z2) == Int(4));
  CHECK(group_index(lat({{2, 4}}, {2, 3}), lat({{1, 2}}, {2, 3})) == Int(2));
  CHECK(!group_index(lat({{1, 0}}, {2, 3}), z2).has_value());
  CHECK_THROWS_AS((void)group_index(lat({{1, 1}}, {2, 3}), lat({{2, 0}}, {2, 3})),
                  error);
}

TEST_CASE("group index via coset counting oracle") {
  std::mt19937_64 rng(555);
  for (int iter = 0; iter < 40; ++iter) {
    IntMat sup = random_mat(rng, 2, 2, 3);
    if (rank(sup) < 2) continue;
    IntMat mult = random_mat(rng, 2, 2, 2);
    if (rank(mult) < 2) continue;
    IntMat sub = mult * sup;
    ExponentLattice lsub{{Atom(Int(2)), Atom(Int(3))}, sub};
    ExponentLattice lsup{{Atom(Int(2)), Atom(Int(3))}, sup};
    auto idx = group_index(lsub, lsup);
    REQUIRE(idx.has_value());
    CHECK(*idx == iabs(abs_det(mult)));
  }
}

TEST_CASE("reindex moves columns by atom") {
  ExponentLattice l = lat({{1, 2}}, {2, 5});
  std::vector<Atom> sup{Atom(Int(2)), Atom(Int(3)), Atom(Int(5))};
  ExponentLattice r = reindex(l, sup);
  CHECK(r.rows == mat({{1, 0, 2}}));
  std::vector<Atom> bad{Atom(Int(2)), Atom(Int(3))};
  CHECK_THROWS_AS((void)reindex(l, bad), error);
}

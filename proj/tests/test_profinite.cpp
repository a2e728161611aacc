#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "mulcov/cover.hpp"
#include "mulcov/profinite.hpp"
#include "mulcov/zhat.hpp"
#include "oracles.hpp"

using namespace mulcov;

namespace {

CoverValue cv(long n) { return cv_rational(factor(Rat(n))); }

CoverPresentation base2() {
  return make_presentation({"k0", "a"}, "k0", {{"a", cv(2)}});
}

// Canonical n-th root of the value shifted by e(turn / n).
CoverValue turned_root(const CoverValue& v, long n, long turn) {
  return cv_mul(cv_pow(v, make_rat(1, n)),
                cv_root_of_unity(make_rat(turn, n)));
}

// Commit roots at every level in ns, the level-n root turned by e(t_n / n).
void commit_turned(CoverPresentation& p, const std::string& g,
                   const std::vector<std::pair<long, long>>& turns) {
  for (const auto& [n, t] : turns)
    commit_root(p, g, n, turned_root(p.values.at(g), n, t));
}

}  // namespace

TEST_CASE("zhat_of lists residues on the divisor closure") {
  ZhatApprox z = zhat_of(5, 6);
  REQUIRE(z.residues.size() == 4);
  CHECK(z.residues.at(1) == 0);
  CHECK(z.residues.at(2) == 1);
  CHECK(z.residues.at(3) == 2);
  CHECK(z.residues.at(6) == 5);
  CHECK(zhat_level(z) == 6);
  check_coherent(z);

  CHECK(zhat_of(-1, 4).residues.at(4) == 3);
  CHECK(zhat_of(12, 4) == zhat_of(0, 4));
  CHECK(oracle::thrown_code([] { (void)zhat_of(0, 0); }) == "MalformedInput");
}

TEST_CASE("coherence validation rejects broken approximations") {
  ZhatApprox z = zhat_of(5, 6);
  ZhatApprox missing = z;
  missing.residues.erase(3);
  CHECK(oracle::thrown_code([&] { check_coherent(missing); }) ==
        "MalformedInput");

  ZhatApprox skew = z;
  skew.residues[2] = 0;
  CHECK(oracle::thrown_code([&] { check_coherent(skew); }) == "MalformedInput");

  ZhatApprox wide = z;
  wide.residues[3] = 5;
  CHECK(oracle::thrown_code([&] { check_coherent(wide); }) == "MalformedInput");

  CHECK(oracle::thrown_code([] { check_coherent(ZhatApprox{}); }) ==
        "MalformedInput");
}

TEST_CASE("zhat_restrict is reduction") {
  ZhatApprox z = zhat_of(5, 6);
  CHECK(zhat_restrict(z, 2) == zhat_of(1, 2));
  CHECK(zhat_restrict(z, 6) == z);
  CHECK(oracle::thrown_code([&] { (void)zhat_restrict(z, 4); }) ==
        "MalformedInput");
}

TEST_CASE("crt_solve frozen examples") {
  CHECK(crt_solve({{{2, 1}, {3, 2}}}) == zhat_of(5, 6));
  CHECK(crt_solve({{{2, 0}, {3, 0}, {4, 0}}}) == zhat_of(0, 12));
  CHECK(crt_solve({{{5, 3}}}) == zhat_of(3, 5));
  CHECK(crt_solve({}) == zhat_of(0, 1));
  CHECK(crt_solve({{{4, 3}, {6, 1}}}) == zhat_of(7, 12));

  CHECK(oracle::thrown_code([] { (void)crt_solve({{{2, 0}, {4, 1}}}); }) ==
        "Inconsistent");
  CHECK(oracle::thrown_code([] { (void)crt_solve({{{0, 0}}}); }) ==
        "MalformedInput");
}

TEST_CASE("crt_solve against residue enumeration") {
  std::mt19937_64 rng(0x2A7);
  int solvable = 0, conflicting = 0;
  for (int trial = 0; trial < 140; ++trial) {
    long count = 1 + static_cast<long>(rng() % 4);
    CongruenceSystem sys;
    long big = 1;
    bool sane = true;
    for (long i = 0; i < count; ++i) {
      long m = 2 + static_cast<long>(rng() % 59);
      long t = static_cast<long>(rng() % static_cast<unsigned long>(m));
      sys.constraints.push_back({m, t});
      big = std::lcm(big, m);
      if (big > 200000) sane = false;
    }
    if (!sane) continue;

    // the oracle scans every residue class of the lcm
    std::vector<long> hits;
    for (long x = 0; x < big; ++x) {
      bool ok = true;
      for (const auto& c : sys.constraints)
        if (x % c.modulus != c.target) ok = false;
      if (ok) hits.push_back(x);
    }

    if (hits.empty()) {
      ++conflicting;
      CHECK(oracle::thrown_code([&] { (void)crt_solve(sys); }) ==
            "Inconsistent");
      continue;
    }
    ++solvable;
    REQUIRE(hits.size() == 1);
    ZhatApprox z = crt_solve(sys);
    CHECK(zhat_level(z) == big);
    CHECK(z.residues.at(big) == hits.front());
    check_coherent(z);
  }
  CHECK(solvable >= 40);
  CHECK(conflicting >= 10);
}

TEST_CASE("nu_for on identical tables is zero") {
  CoverPresentation h = base2();
  CoverPresentation g = base2();
  commit_turned(h, "a", {{2, 0}, {3, 0}});
  commit_turned(g, "a", {{2, 0}, {3, 0}});
  ZhatApprox nu = nu_for(h, "a", g, "a", 6);
  CHECK(nu == zhat_of(0, 6));
}

TEST_CASE("nu_for reads the canonical turn at every level") {
  CoverPresentation h = base2();
  CoverPresentation g = base2();
  for (long n = 2; n <= 6; ++n) {
    commit_root(h, "a", n, turned_root(h.values.at("a"), n, 1));
    commit_root(g, "a", n, turned_root(g.values.at("a"), n, 0));
  }
  ZhatApprox nu = nu_for(h, "a", g, "a", 6);
  CHECK(zhat_level(nu) == 60);
  for (long n = 2; n <= 6; ++n) CHECK(nu.residues.at(n) == 1);
  CHECK(nu.residues.at(60) == 1);
}

TEST_CASE("nu_for mixes levels through the forced lifts") {
  // half turn at level 2 and two thirds at level 3 force 5/6 at level 6
  CoverPresentation h = base2();
  CoverPresentation g = base2();
  commit_turned(h, "a", {{2, 1}, {3, 2}});
  commit_turned(g, "a", {{2, 0}, {3, 0}});
  ZhatApprox nu = nu_for(h, "a", g, "a", 6);
  CHECK(nu == zhat_of(5, 6));

  // a tighter bound reads fewer levels
  CoverPresentation h2 = base2();
  CoverPresentation g2 = base2();
  commit_turned(h2, "a", {{2, 1}, {3, 2}});
  commit_turned(g2, "a", {{2, 0}, {3, 0}});
  CHECK(nu_for(h2, "a", g2, "a", 2) == zhat_of(1, 2));

  // and the wide answer restricts to the narrow one
  CHECK(zhat_restrict(nu, 2) == zhat_of(1, 2));
  CHECK(zhat_restrict(nu, 3) == zhat_of(2, 3));
}

TEST_CASE("nu_for ignores levels only one side pins") {
  CoverPresentation h = base2();
  CoverPresentation g = base2();
  commit_turned(h, "a", {{2, 1}, {4, 1}});
  commit_turned(g, "a", {{2, 0}});
  ZhatApprox nu = nu_for(h, "a", g, "a", 6);
  CHECK(nu == zhat_of(1, 2));
}

TEST_CASE("nu_for validation") {
  CoverPresentation h = base2();
  CoverPresentation g =
      make_presentation({"k0", "a"}, "k0", {{"a", cv(3)}});
  CHECK(oracle::thrown_code([&] { (void)nu_for(h, "a", g, "a", 6); }) ==
        "Inconsistent");
  CoverPresentation g2 = base2();
  CHECK(oracle::thrown_code([&] { (void)nu_for(h, "zz", g2, "a", 6); }) ==
        "MalformedInput");
  CHECK(oracle::thrown_code([&] { (void)nu_for(h, "k0", g2, "a", 6); }) ==
        "MalformedInput");
  CHECK(oracle::thrown_code([&] { (void)nu_for(h, "a", g2, "a", 0); }) ==
        "MalformedInput");
  CHECK(oracle::thrown_code([&] { (void)nu_for(h, "a", g2, "a", 2000000); }) ==
        "BudgetExceeded");
}

TEST_CASE("build_sigma on the identity is zero") {
  CoverPresentation h = base2();
  CoverPresentation g = base2();
  commit_turned(h, "a", {{4, 0}});
  commit_turned(g, "a", {{4, 0}});
  SigmaMap s = build_sigma(h, g, 12);
  REQUIRE(s.shifts.count("a") == 1);
  CHECK(s.shifts.at("a") == zhat_of(0, 4));
}

TEST_CASE("build_sigma reads independent generator shifts") {
  auto mk = [] {
    return make_presentation({"k0", "a", "b"}, "k0",
                             {{"a", cv(2)}, {"b", cv(3)}});
  };
  CoverPresentation h = mk();
  CoverPresentation g = mk();
  commit_turned(h, "a", {{2, 1}});
  commit_turned(g, "a", {{2, 0}});
  commit_turned(h, "b", {{4, 1}});
  commit_turned(g, "b", {{4, 0}});
  SigmaMap s = build_sigma(h, g, 12);
  CHECK(s.shifts.at("a") == zhat_of(1, 2));
  CHECK(s.shifts.at("b") == zhat_of(1, 4));
}

TEST_CASE("build_sigma refines under a larger bound") {
  auto mk = [](long t2, long t3) {
    CoverPresentation p = base2();
    commit_turned(p, "a", {{2, t2}, {3, t3}});
    return p;
  };
  CoverPresentation h3 = mk(1, 2), g3 = mk(0, 0);
  CoverPresentation h6 = mk(1, 2), g6 = mk(0, 0);
  SigmaMap narrow = build_sigma(h3, g3, 3);
  SigmaMap wide = build_sigma(h6, g6, 6);
  CHECK(wide.shifts.at("a") == zhat_of(5, 6));
  CHECK(narrow.shifts.at("a") ==
        crt_solve({{{2, 1}, {3, 2}}}));
  CHECK(zhat_restrict(wide.shifts.at("a"), 2) ==
        zhat_restrict(narrow.shifts.at("a"), 2));
  CHECK(zhat_restrict(wide.shifts.at("a"), 3) ==
        zhat_restrict(narrow.shifts.at("a"), 3));
}

TEST_CASE("build_sigma rejects mismatched presentations") {
  CoverPresentation h = base2();
  CoverPresentation g =
      make_presentation({"k0", "a"}, "k0", {{"a", cv(3)}});
  CHECK(oracle::thrown_code([&] { (void)build_sigma(h, g, 6); }) ==
        "Inconsistent");
  CoverPresentation g2 =
      make_presentation({"k0", "b"}, "k0", {{"b", cv(2)}});
  CHECK(oracle::thrown_code([&] { (void)build_sigma(h, g2, 6); }) ==
        "Inconsistent");
}

TEST_CASE("perturbed roots of random presentations recover their shifts") {
  std::mt19937_64 rng(0x516A);
  for (int trial = 0; trial < 30; ++trial) {
    long base = 2 + static_cast<long>(rng() % 28);
    CoverPresentation h =
        make_presentation({"k0", "a"}, "k0", {{"a", cv(base)}});
    CoverPresentation g =
        make_presentation({"k0", "a"}, "k0", {{"a", cv(base)}});
    // draw a true shift and expose it modulo a few levels
    long truth = static_cast<long>(rng() % 12);
    std::set<long> levels;
    for (int i = 0; i < 3; ++i) levels.insert(2 + static_cast<long>(rng() % 5));
    for (long n : levels) {
      commit_root(h, "a", n, turned_root(h.values.at("a"), n, truth % n));
      commit_root(g, "a", n, turned_root(g.values.at("a"), n, 0));
    }
    ZhatApprox nu = nu_for(h, "a", g, "a", 6);
    for (long n : levels) CHECK(nu.residues.at(n) == truth % n);
    SigmaMap s = build_sigma(h, g, 6);
    CHECK(s.shifts.at("a") == nu);
  }
}

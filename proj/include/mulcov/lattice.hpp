#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mulcov/factored.hpp"
#include "mulcov/scalar.hpp"

namespace mulcov {

// Coordinate label of an exponent vector: a prime or a formal symbol.
// Variant order makes all primes sort before all symbols.
using Atom = std::variant<Int, std::string>;

std::string atom_string(const Atom& a);

// Sublattice of Z^support given by generating rows.
struct ExponentLattice {
  std::vector<Atom> support;  // strictly increasing
  IntMat rows;                // one generator per row, cols == support.size()
};

// Raw integer-matrix routines.

// Row echelon over Z with pivots positive and entries above each pivot
// reduced into [0, pivot).  Zero rows are dropped.
IntMat upper_hnf(const IntMat& a);

// Canonical basis used everywhere: pivots are the rightmost nonzero entry
// of their row, pivot columns increase, pivots positive, entries below a
// pivot reduced into [0, pivot).
IntMat lower_hnf(const IntMat& a);

struct SmithDecomposition {
  IntMat s;  // diagonal, invariants d1 | d2 | ...
  IntMat u;  // unimodular, u * a * v == s
  IntMat v;
};

SmithDecomposition smith(const IntMat& a);

std::vector<Int> smith_invariants(const IntMat& a);

long rank(const IntMat& a);

// Basis rows of {v : a * v = 0}.
IntMat col_kernel(const IntMat& a);

// Basis rows of the saturation {w : k*w in rowspan(a) for some k != 0}.
IntMat saturate_rows(const IntMat& a);

// |det| of a square full-rank matrix.
Int abs_det(const IntMat& a);

// Coordinates of v in the row basis `basis` (any basis, by reduction
// against lower_hnf shape), or nullopt.  `basis` must be in lower HNF.
std::optional<IntVec> solve_in_rows(const IntMat& hnf_basis, const IntVec& v);

// Exact solution of a * x = b over the rationals, or nullopt.
std::optional<RatVec> solve_rational(const RatMat& a, const RatVec& b);

// Labeled operations.

struct NormalForm {
  ExponentLattice hnf;
  std::vector<Int> snf_diagonal;
};

NormalForm normal_form(const ExponentLattice& l);

ExponentLattice saturate(const ExponentLattice& l);

// Coordinates of v with respect to the canonical basis of l.
std::optional<IntVec> member(const ExponentLattice& l,
                             const std::vector<Atom>& support,
                             const IntVec& v);

// nullopt encodes an infinite index.
std::optional<Int> group_index(const ExponentLattice& sub,
                               const ExponentLattice& super);

// Exponent lattice spanned by the tuple, support = union of primes.
ExponentLattice lattice_of_tuple(const std::vector<FactoredRational>& t);

bool is_mult_independent(const std::vector<FactoredRational>& t);

// Rewrites l on a larger support (error if support misses a used atom).
ExponentLattice reindex(const ExponentLattice& l,
                        const std::vector<Atom>& support);

}  // namespace mulcov

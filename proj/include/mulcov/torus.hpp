#pragma once

#include <map>
#include <string>
#include <vector>

#include "mulcov/factored.hpp"
#include "mulcov/lattice.hpp"

namespace mulcov {

// One coordinate of a point in the torus: a nonzero rational times the
// root of unity e(twist_exp / twist_order), times a formal monomial in
// transcendental symbols.  A purely symbolic coordinate keeps value = 1.
struct TorusCoordinate {
  FactoredRational value;
  long twist_order = 1;
  long twist_exp = 0;
  std::map<std::string, Int> symbols;  // exponents nonzero

  bool operator==(const TorusCoordinate& o) const = default;
};

using TorusPoint = std::vector<TorusCoordinate>;

TorusCoordinate coord_rational(const FactoredRational& v);
TorusCoordinate coord_twisted(const FactoredRational& v, long order, long exp);
TorusCoordinate coord_symbol(const std::string& name, const Int& exp = Int(1));

// Coordinate-wise product; points must have equal dimension.
TorusPoint point_mul(const TorusPoint& a, const TorusPoint& b);

TorusPoint point_inv(const TorusPoint& a);

// Lattice of integer characters n with prod_j g_j^{n_j} = 1 for every
// generator g, torsion twists included.  Support atoms are the coordinate
// indexes 1..l.
ExponentLattice relation_lattice(const std::vector<TorusPoint>& gens);

// Number of irreducible components of the closure of the generated
// subgroup: [saturate(L) : L] for L the relation lattice.
Int closure_components(const std::vector<TorusPoint>& gens);

// Component count of the preimage under the coordinate-wise d-th power
// map: [saturate(dL) : dL] = d^{rank L} * closure_components.
Int pullback_components(const std::vector<TorusPoint>& gens, long d);

}  // namespace mulcov

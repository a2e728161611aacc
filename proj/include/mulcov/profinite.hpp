#pragma once

#include <map>
#include <string>

#include "mulcov/cover.hpp"
#include "mulcov/zhat.hpp"

namespace mulcov {

// Kernel correction sigma(h) = h + nu_h * kernel with profinite nu, one
// approximation per generator, satisfying ex_H = ex_G after sigma on
// everything both tables materialize.
struct SigmaMap {
  std::map<std::string, ZhatApprox> shifts;
};

// The shift forced by the committed tables: at every level n <= bound that
// both sides pin, root_H(h, n) = root_G(g, n) e(nu / n).  The two
// presentations must give h and g the same value.  Raises Inconsistent
// when they do not cover the same element.
ZhatApprox nu_for(CoverPresentation& h_side, const std::string& h,
                  CoverPresentation& g_side, const std::string& g,
                  long bound);

// Generator-wise shifts between two presentations of the same cover data,
// verified additive on generator sums and commuting at every applicable
// level up to bound.
SigmaMap build_sigma(CoverPresentation& h_side, CoverPresentation& g_side,
                     long bound);

}  // namespace mulcov

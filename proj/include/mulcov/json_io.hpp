#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mulcov/cover.hpp"
#include "mulcov/cyclotomic.hpp"
#include "mulcov/kummer.hpp"
#include "mulcov/lattice.hpp"
#include "mulcov/profinite.hpp"
#include "mulcov/simplicity.hpp"
#include "mulcov/torus.hpp"
#include "mulcov/zhat.hpp"

namespace mulcov {

// Version tag every JSON request document must carry.
inline constexpr const char* kSchemaVersion = "mulcov/1";

// Serialization conventions: rationals are canonical decimal strings
// ("num/den", bare "num" for integers), integers are JSON numbers when
// they fit a 64-bit signed and decimal strings otherwise, object keys are
// emitted in sorted order.  All parsers reject unknown fields and raise
// MalformedInput with the offending key.

nlohmann::json to_json(const Rat& q);
nlohmann::json to_json(const Int& n);
nlohmann::json to_json(const FactoredRational& f);
nlohmann::json to_json(const ExponentLattice& l);
nlohmann::json to_json(const CyclotomicElement& x);
nlohmann::json to_json(const RadicalTuple& r);
nlohmann::json to_json(const TorusCoordinate& c);
nlohmann::json to_json(const TorusPoint& p);
nlohmann::json to_json(const CoverValue& v);
nlohmann::json to_json(const HElem& h);
nlohmann::json to_json(const CoverPresentation& p);
nlohmann::json to_json(const PartialIso& iso);
nlohmann::json to_json(const ZhatApprox& z);
nlohmann::json to_json(const SigmaMap& s);
nlohmann::json to_json(const SimplicityCertificate& c);
nlohmann::json to_json(const PureHullBasis& h);
nlohmann::json to_json(const ConjugacyDecision& d);

Rat rat_from_json(const nlohmann::json& j);
Int int_from_json(const nlohmann::json& j);
long long_from_json(const nlohmann::json& j);

// Accepts the {"sign", "factors"} object or a rational string factored
// within trial_bound.
FactoredRational factored_from_json(const nlohmann::json& j,
                                    unsigned long trial_bound = 100000);

std::vector<FactoredRational> tuple_from_json(const nlohmann::json& j,
                                              unsigned long trial_bound =
                                                  100000);

RadicalTuple radical_from_json(const nlohmann::json& j,
                               unsigned long trial_bound = 100000);

ConjugacyContext context_from_json(const nlohmann::json& j,
                                   unsigned long trial_bound = 100000);

TorusPoint point_from_json(const nlohmann::json& j,
                           unsigned long trial_bound = 100000);

CoverValue cover_value_from_json(const nlohmann::json& j);

// Rebuilds the presentation and replays its committed roots; an optional
// "schema" key is validated when present so a presentation can stand alone
// as a document.
CoverPresentation presentation_from_json(const nlohmann::json& j);

// The {"modulus": target, ...} object form; keys are decimal moduli.
CongruenceSystem system_from_json(const nlohmann::json& j);

}  // namespace mulcov

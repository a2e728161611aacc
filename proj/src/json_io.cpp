#include "mulcov/json_io.hpp"

#include <stdexcept>
#include <utility>

#include "mulcov/errors.hpp"
#include "mulcov/primes.hpp"

namespace mulcov {

using nlohmann::json;

namespace {

void check_keys(const json& j, const char* what,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(errc::malformed_input, std::string(what) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok)
      fail(errc::malformed_input,
           std::string("unknown field \"") + item.key() + "\" in " + what);
  }
}

const json& field(const json& j, const char* what, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    fail(errc::malformed_input,
         std::string(what) + " is missing required field \"" + key + "\"");
  return *it;
}

Int int_from_string(const std::string& s, const char* what) {
  try {
    if (s.empty()) throw std::invalid_argument("empty");
    return Int(s, 10);
  } catch (const std::invalid_argument&) {
    fail(errc::malformed_input,
         std::string("\"") + s + "\" is not a decimal integer in " + what);
  }
}

// Map keys serialize integers as decimal strings.
long long_key(const std::string& s, const char* what) {
  Int n = int_from_string(s, what);
  if (!fits_long(n))
    fail(errc::malformed_input, std::string("key out of range in ") + what);
  return to_long(n);
}

std::string int_key(const Int& n) { return n.get_str(); }

}  // namespace

json to_json(const Rat& q) { return rat_string(q); }

json to_json(const Int& n) {
  if (fits_long(n)) return to_long(n);
  return n.get_str();
}

json to_json(const FactoredRational& f) {
  json factors = json::object();
  for (const auto& [p, e] : f.exponents) factors[int_key(p)] = to_json(e);
  return json{{"sign", f.sign}, {"factors", std::move(factors)}};
}

json to_json(const ExponentLattice& l) {
  json support = json::array();
  for (const auto& a : l.support) {
    if (std::holds_alternative<Int>(a))
      support.push_back(to_json(std::get<Int>(a)));
    else
      support.push_back(std::get<std::string>(a));
  }
  json rows = json::array();
  for (long i = 0; i < l.rows.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < l.rows.cols(); ++j) row.push_back(to_json(l.rows(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"support", std::move(support)}, {"rows", std::move(rows)}};
}

json to_json(const CyclotomicElement& x) {
  json coeffs = json::array();
  for (long i = 0; i < x.coeffs.size(); ++i) coeffs.push_back(to_json(x.coeffs(i)));
  return json{{"n", x.n}, {"coeffs", std::move(coeffs)}};
}

json to_json(const RadicalTuple& r) {
  json bases = json::array();
  for (const auto& b : r.bases) bases.push_back(to_json(b));
  return json{{"bases", std::move(bases)},
              {"denominator", r.denominator},
              {"twists", r.twists}};
}

json to_json(const TorusCoordinate& c) {
  json o = json::object();
  bool plain = c.twist_order == 1 && c.symbols.empty();
  if (plain || !(c.value.sign == 1 && c.value.exponents.empty())) {
    o["sign"] = c.value.sign;
    json factors = json::object();
    for (const auto& [p, e] : c.value.exponents) factors[int_key(p)] = to_json(e);
    o["factors"] = std::move(factors);
  }
  if (c.twist_order > 1)
    o["twist"] = json{{"order", c.twist_order}, {"exp", c.twist_exp}};
  if (c.symbols.size() == 1 && c.symbols.begin()->second == 1) {
    o["symbol"] = c.symbols.begin()->first;
  } else if (!c.symbols.empty()) {
    json syms = json::object();
    for (const auto& [name, e] : c.symbols) syms[name] = to_json(e);
    o["symbols"] = std::move(syms);
  }
  return o;
}

json to_json(const TorusPoint& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(to_json(c));
  return a;
}

json to_json(const CoverValue& v) {
  json o = json::object();
  if (!v.radicand.empty()) {
    json rad = json::object();
    for (const auto& [p, e] : v.radicand) rad[int_key(p)] = to_json(e);
    o["radicand"] = std::move(rad);
  }
  if (v.zeta != 0) o["zeta"] = to_json(v.zeta);
  if (!v.symbols.empty()) {
    json syms = json::object();
    for (const auto& [name, e] : v.symbols) syms[name] = to_json(e);
    o["symbols"] = std::move(syms);
  }
  return o;
}

json to_json(const HElem& h) {
  json o = json::object();
  for (const auto& [name, c] : h) o[name] = to_json(c);
  return o;
}

json to_json(const CoverPresentation& p) {
  json values = json::object();
  for (const auto& [name, v] : p.values) values[name] = to_json(v);
  json roots = json::array();
  for (const auto& [key, v] : p.roots)
    roots.push_back(json{{"generator", key.first},
                         {"den", key.second},
                         {"value", to_json(v)}});
  return json{{"generators", p.generators},
              {"kernel", p.kernel},
              {"kernel_scale", p.kernel_scale},
              {"values", std::move(values)},
              {"roots", std::move(roots)},
              {"mu", p.explicit_mu},
              {"denominator_bound", p.denominator_bound}};
}

json to_json(const PartialIso& iso) {
  json linear = json::object();
  for (const auto& [name, img] : iso.linear_map) linear[name] = to_json(img);
  return json{{"pairing", iso.pairing},
              {"linear_map", std::move(linear)},
              {"domain", to_json(iso.domain)},
              {"codomain", to_json(iso.codomain)}};
}

json to_json(const ZhatApprox& z) {
  long level = zhat_level(z);
  return json{{"mod", level}, {"residue", z.residues.at(level)}};
}

json to_json(const SigmaMap& s) {
  json shifts = json::object();
  for (const auto& [name, z] : s.shifts) shifts[name] = to_json(z);
  return json{{"shifts", std::move(shifts)}};
}

json to_json(const SimplicityCertificate& c) {
  json tuple = json::array();
  for (const auto& f : c.tuple) tuple.push_back(to_json(f));
  json smith = json::array();
  for (const auto& d : c.smith) smith.push_back(to_json(d));
  json witness;
  if (c.witness) {
    json comb = json::array();
    for (long i = 0; i < c.witness->combination.size(); ++i)
      comb.push_back(to_json(c.witness->combination(i)));
    witness = json{{"combination", std::move(comb)},
                   {"b", to_json(c.witness->b)},
                   {"n", to_json(c.witness->n)},
                   {"solution", to_json(c.witness->solution)}};
  }
  return json{{"verdict", c.verdict},
              {"independent", c.independent},
              {"smith", std::move(smith)},
              {"witness", std::move(witness)},
              {"tuple", std::move(tuple)}};
}

json to_json(const PureHullBasis& h) {
  json base = json::array();
  for (const auto& f : h.base_tuple) base.push_back(to_json(f));
  json half = json::array();
  for (const auto& r : h.half_basis) half.push_back(to_json(r));
  return json{{"base_tuple", std::move(base)},
              {"half_basis", std::move(half)},
              {"conductor", h.conductor},
              {"index", to_json(h.index)}};
}

json to_json(const ConjugacyDecision& d) {
  json witness;
  if (d.witness) witness = json{{"n", d.witness->n}, {"k", d.witness->k}};
  json obstruction;
  if (d.obstruction) obstruction = *d.obstruction;
  return json{{"verdict", d.verdict},
              {"witness", std::move(witness)},
              {"shifts", d.shifts},
              {"obstruction", std::move(obstruction)}};
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(Int(std::to_string(j.get<long long>())));
  if (!j.is_string())
    fail(errc::malformed_input, "rational must be a \"num/den\" string");
  std::string s = j.get<std::string>();
  try {
    if (s.empty()) throw std::invalid_argument("empty");
    Rat q(s, 10);
    if (q.get_den() == 0) fail(errc::malformed_input, "zero denominator in \"" + s + "\"");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    fail(errc::malformed_input, "\"" + s + "\" is not a rational");
  }
}

Int int_from_json(const json& j) {
  if (j.is_number_unsigned()) return Int(std::to_string(j.get<unsigned long long>()));
  if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
  if (j.is_string()) return int_from_string(j.get<std::string>(), "integer field");
  fail(errc::malformed_input, "expected an integer");
}

long long_from_json(const json& j) {
  Int n = int_from_json(j);
  if (!fits_long(n)) fail(errc::malformed_input, "integer out of range");
  return to_long(n);
}

FactoredRational factored_from_json(const json& j, unsigned long trial_bound) {
  if (j.is_string() || j.is_number_integer()) return factor(rat_from_json(j), trial_bound);
  check_keys(j, "factored rational", {"sign", "factors"});
  FactoredRational f;
  int sign = static_cast<int>(long_from_json(field(j, "factored rational", "sign")));
  if (sign != 1 && sign != -1)
    fail(errc::malformed_input, "sign must be 1 or -1");
  f.sign = sign;
  const json& factors = field(j, "factored rational", "factors");
  if (!factors.is_object())
    fail(errc::malformed_input, "\"factors\" must be an object");
  for (const auto& item : factors.items()) {
    Int p = int_from_string(item.key(), "\"factors\"");
    if (p < 2 || !is_prime(p))
      fail(errc::malformed_input, "factor key " + item.key() + " is not prime");
    Int e = int_from_json(item.value());
    if (e == 0) fail(errc::malformed_input, "zero exponent on factor " + item.key());
    f.exponents[p] = e;
  }
  return f;
}

std::vector<FactoredRational> tuple_from_json(const json& j,
                                              unsigned long trial_bound) {
  if (!j.is_array()) fail(errc::malformed_input, "tuple must be a JSON array");
  std::vector<FactoredRational> t;
  for (const auto& entry : j) t.push_back(factored_from_json(entry, trial_bound));
  return t;
}

RadicalTuple radical_from_json(const json& j, unsigned long trial_bound) {
  check_keys(j, "radical tuple", {"bases", "denominator", "twists"});
  RadicalTuple r;
  r.bases = tuple_from_json(field(j, "radical tuple", "bases"), trial_bound);
  r.denominator = long_from_json(field(j, "radical tuple", "denominator"));
  if (r.denominator < 1)
    fail(errc::malformed_input, "radical denominator must be positive");
  if (auto it = j.find("twists"); it != j.end()) {
    if (!it->is_array()) fail(errc::malformed_input, "\"twists\" must be an array");
    for (const auto& t : *it) r.twists.push_back(long_from_json(t));
  } else {
    r.twists.assign(r.bases.size(), 0);
  }
  if (r.twists.size() != r.bases.size())
    fail(errc::malformed_input, "twists and bases differ in length");
  return r;
}

ConjugacyContext context_from_json(const json& j, unsigned long trial_bound) {
  check_keys(j, "context", {"conductor", "fixed"});
  ConjugacyContext ctx;
  if (auto it = j.find("conductor"); it != j.end()) {
    ctx.conductor = long_from_json(*it);
    if (ctx.conductor < 1)
      fail(errc::malformed_input, "conductor must be positive");
  }
  if (auto it = j.find("fixed"); it != j.end()) {
    if (!it->is_array()) fail(errc::malformed_input, "\"fixed\" must be an array");
    for (const auto& r : *it) ctx.fixed.push_back(radical_from_json(r, trial_bound));
  }
  return ctx;
}

TorusPoint point_from_json(const json& j, unsigned long trial_bound) {
  if (!j.is_array()) fail(errc::malformed_input, "torus point must be a JSON array");
  TorusPoint p;
  for (const auto& cj : j) {
    check_keys(cj, "torus coordinate",
               {"sign", "factors", "twist", "symbol", "symbols"});
    FactoredRational value;
    if (cj.contains("sign") || cj.contains("factors")) {
      json fr = json::object();
      fr["sign"] = cj.contains("sign") ? cj["sign"] : json(1);
      fr["factors"] = cj.contains("factors") ? cj["factors"] : json::object();
      value = factored_from_json(fr, trial_bound);
    }
    long order = 1, exp = 0;
    if (auto it = cj.find("twist"); it != cj.end()) {
      check_keys(*it, "twist", {"order", "exp"});
      order = long_from_json(field(*it, "twist", "order"));
      exp = long_from_json(field(*it, "twist", "exp"));
    }
    TorusCoordinate c = coord_twisted(value, order, exp);
    if (cj.contains("symbol") && cj.contains("symbols"))
      fail(errc::malformed_input, "coordinate has both \"symbol\" and \"symbols\"");
    if (auto it = cj.find("symbol"); it != cj.end()) {
      if (!it->is_string()) fail(errc::malformed_input, "\"symbol\" must be a string");
      c.symbols[it->get<std::string>()] = 1;
    }
    if (auto it = cj.find("symbols"); it != cj.end()) {
      if (!it->is_object()) fail(errc::malformed_input, "\"symbols\" must be an object");
      for (const auto& item : it->items()) {
        Int e = int_from_json(item.value());
        if (e == 0)
          fail(errc::malformed_input, "zero exponent on symbol " + item.key());
        c.symbols[item.key()] = e;
      }
    }
    p.push_back(std::move(c));
  }
  return p;
}

CoverValue cover_value_from_json(const json& j) {
  check_keys(j, "cover value", {"radicand", "zeta", "symbols"});
  CoverValue v;
  if (auto it = j.find("radicand"); it != j.end()) {
    if (!it->is_object()) fail(errc::malformed_input, "\"radicand\" must be an object");
    for (const auto& item : it->items()) {
      Int p = int_from_string(item.key(), "\"radicand\"");
      if (p < 2 || !is_prime(p))
        fail(errc::malformed_input, "radicand key " + item.key() + " is not prime");
      Rat e = rat_from_json(item.value());
      if (e == 0) fail(errc::malformed_input, "zero exponent in radicand");
      v.radicand[p] = e;
    }
  }
  if (auto it = j.find("zeta"); it != j.end()) v.zeta = rat_from_json(*it);
  if (auto it = j.find("symbols"); it != j.end()) {
    if (!it->is_object()) fail(errc::malformed_input, "\"symbols\" must be an object");
    for (const auto& item : it->items()) {
      Rat e = rat_from_json(item.value());
      if (e == 0) fail(errc::malformed_input, "zero exponent on symbol " + item.key());
      v.symbols[item.key()] = e;
    }
  }
  return v;
}

CoverPresentation presentation_from_json(const json& j) {
  check_keys(j, "presentation",
             {"schema", "generators", "kernel", "kernel_scale", "values",
              "roots", "mu", "denominator_bound"});
  if (auto it = j.find("schema"); it != j.end() && *it != kSchemaVersion)
    fail(errc::malformed_input, "unsupported schema version");
  const json& gens = field(j, "presentation", "generators");
  if (!gens.is_array()) fail(errc::malformed_input, "\"generators\" must be an array");
  std::vector<std::string> generators;
  for (const auto& g : gens) {
    if (!g.is_string()) fail(errc::malformed_input, "generator names must be strings");
    generators.push_back(g.get<std::string>());
  }
  const json& kernel = field(j, "presentation", "kernel");
  if (!kernel.is_string()) fail(errc::malformed_input, "\"kernel\" must be a string");
  long scale = 1;
  if (auto it = j.find("kernel_scale"); it != j.end()) scale = long_from_json(*it);
  const json& vals = field(j, "presentation", "values");
  if (!vals.is_object()) fail(errc::malformed_input, "\"values\" must be an object");
  std::map<std::string, CoverValue> values;
  for (const auto& item : vals.items())
    values[item.key()] = cover_value_from_json(item.value());

  CoverPresentation p = make_presentation(std::move(generators),
                                          kernel.get<std::string>(),
                                          std::move(values), scale);
  if (auto it = j.find("mu"); it != j.end()) {
    long mu = long_from_json(*it);
    if (mu < 1) fail(errc::malformed_input, "\"mu\" must be positive");
    if (mu > 1) materialize_mu(p, mu);
  }
  if (auto it = j.find("roots"); it != j.end()) {
    if (!it->is_array()) fail(errc::malformed_input, "\"roots\" must be an array");
    for (const auto& rj : *it) {
      check_keys(rj, "root entry", {"generator", "den", "value"});
      const json& name = field(rj, "root entry", "generator");
      if (!name.is_string())
        fail(errc::malformed_input, "root \"generator\" must be a string");
      long den = long_from_json(field(rj, "root entry", "den"));
      if (den < 2) fail(errc::malformed_input, "root \"den\" must be at least 2");
      commit_root(p, name.get<std::string>(), den,
                  cover_value_from_json(field(rj, "root entry", "value")));
    }
  }
  if (auto it = j.find("denominator_bound"); it != j.end()) {
    long bound = long_from_json(*it);
    if (bound < 1) fail(errc::malformed_input, "\"denominator_bound\" must be positive");
    p.denominator_bound = std::max(p.denominator_bound, bound);
  }
  return p;
}

CongruenceSystem system_from_json(const json& j) {
  if (!j.is_object()) fail(errc::malformed_input, "system must be a JSON object");
  CongruenceSystem sys;
  for (const auto& item : j.items()) {
    Congruence c;
    c.modulus = long_key(item.key(), "system");
    if (c.modulus < 1) fail(errc::malformed_input, "modulus must be positive");
    c.target = long_from_json(item.value());
    sys.constraints.push_back(c);
  }
  return sys;
}

}  // namespace mulcov

// Command line front end: one binary, subcommand dispatch, JSON in and out.
// Exit codes: 0 success, 1 domain error (machine-readable error object on
// stdout), 2 malformed input or command line.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mulcov/errors.hpp"
#include "mulcov/json_io.hpp"

namespace {

using nlohmann::json;
using namespace mulcov;

struct Budgets {
  unsigned long factor = 100000;
  long conductor = 512;
  long denominator = 64;

  json echo() const {
    return json{{"factor", factor},
                {"conductor", conductor},
                {"denominator", denominator}};
  }
};

json load_doc(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path);
    if (!in) fail(errc::malformed_input, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(errc::malformed_input, e.what());
  }
}

void check_keys(const json& j, const char* what,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    fail(errc::malformed_input, std::string(what) + " must be a JSON object");
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

void require_schema(const json& doc) {
  if (!doc.is_object() || !doc.contains("schema"))
    fail(errc::malformed_input, "document is missing the \"schema\" field");
  if (doc["schema"] != kSchemaVersion)
    fail(errc::malformed_input, "unsupported schema version");
}

// Tuple argument: --tuple takes a comma list of rationals (empty string is
// the empty tuple); otherwise the JSON document {"schema", "tuple"}.
std::vector<FactoredRational> tuple_input(bool flag_given,
                                          const std::string& flag_value,
                                          const std::string& input,
                                          const Budgets& budgets) {
  if (flag_given) {
    std::vector<FactoredRational> t;
    std::stringstream ss(flag_value);
    std::string entry;
    while (std::getline(ss, entry, ','))
      t.push_back(factored_from_json(json(entry), budgets.factor));
    return t;
  }
  json doc = load_doc(input);
  require_schema(doc);
  check_keys(doc, "request", {"schema", "tuple"});
  return tuple_from_json(field(doc, "request", "tuple"), budgets.factor);
}

void print_text(const json& result, const json& budgets) {
  for (const auto& item : result.items()) {
    std::cout << item.key() << ": ";
    if (item.value().is_string())
      std::cout << item.value().get<std::string>();
    else
      std::cout << item.value().dump();
    std::cout << "\n";
  }
  std::cout << "budgets: " << budgets.dump() << "\n";
}

void emit(const json& result, const Budgets& budgets,
          const std::string& format) {
  if (format == "text") {
    print_text(result, budgets.echo());
    return;
  }
  json out{{"schema", kSchemaVersion},
           {"result", result},
           {"budgets", budgets.echo()}};
  std::cout << out.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for multiplicative covers"};
  app.require_subcommand(1);

  std::string format = "json";
  Budgets budgets;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--budget-factor", budgets.factor,
                 "trial division bound for factoring input rationals")
      ->envname("MULCOV_BUDGET_FACTOR");
  app.add_option("--budget-conductor", budgets.conductor,
                 "largest cyclotomic conductor accepted")
      ->envname("MULCOV_BUDGET_CONDUCTOR");
  app.add_option("--budget-denominator", budgets.denominator,
                 "largest root denominator materialized")
      ->envname("MULCOV_BUDGET_DENOMINATOR");

  // Shared option storage; each subcommand reads only its own entries.
  std::string input = "-";
  std::string tuple_str, a_str, domain_path, codomain_path;
  long k = 0, n = 0, conductor = 1, d = 0, bound = 0;

  auto* simple = app.add_subcommand("simple-check",
                                    "independence and purity certificate");
  auto* simple_tuple = simple->add_option("--tuple", tuple_str);
  simple->add_option("--input", input, "JSON request file, - for stdin");

  auto* ksimple = app.add_subcommand("k-simple", "k-simplicity of a rational");
  ksimple->add_option("--a", a_str)->required();
  ksimple->add_option("--k", k)->required();

  auto* stab = app.add_subcommand("stabilizer",
                                  "stabilizing root order of a simple rational");
  stab->add_option("--a", a_str)->required();

  auto* hull = app.add_subcommand("pure-hull", "pure hull basis of a tuple");
  auto* hull_tuple = hull->add_option("--tuple", tuple_str);
  hull->add_option("--input", input);

  auto* kummer = app.add_subcommand("kummer-degree",
                                    "degree of the n-th root extension");
  auto* kummer_tuple = kummer->add_option("--tuple", tuple_str);
  kummer->add_option("--input", input);
  kummer->add_option("--n", n)->required();
  kummer->add_option("--conductor", conductor);

  auto* conj = app.add_subcommand("conjugate",
                                  "conjugacy of two radical tuples");
  conj->add_option("--input", input);

  auto* stabm = app.add_subcommand("stabilizer-m",
                                   "denominator stabilizing root choices");
  auto* stabm_tuple = stabm->add_option("--tuple", tuple_str);
  stabm->add_option("--input", input);

  auto* closure = app.add_subcommand("closure",
                                     "components of the generated closure");
  closure->add_option("--input", input);

  auto* pullback = app.add_subcommand("pullback",
                                      "components of the power-map preimage");
  pullback->add_option("--input", input);
  auto* pullback_d = pullback->add_option("--d", d);

  auto* backforth = app.add_subcommand("backforth",
                                       "isomorphism between two presentations");
  backforth->add_option("--input", input);
  auto* dom_opt = backforth->add_option("--domain", domain_path);
  auto* cod_opt = backforth->add_option("--codomain", codomain_path);

  auto* solve = app.add_subcommand("zhat-solve", "profinite congruence system");
  solve->add_option("--input", input);

  auto* sigma = app.add_subcommand("zhat-sigma",
                                   "kernel shifts between two presentations");
  sigma->add_option("--input", input);
  auto* sigma_bound = sigma->add_option("--bound", bound);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  simple->callback([&] {
    auto t = tuple_input(simple_tuple->count() > 0, tuple_str, input, budgets);
    emit(to_json(is_simple_tuple(t)), budgets, format);
  });

  ksimple->callback([&] {
    FactoredRational a = factored_from_json(json(a_str), budgets.factor);
    emit(json{{"verdict", is_k_simple(a, Int(k))}}, budgets, format);
  });

  stab->callback([&] {
    FactoredRational a = factored_from_json(json(a_str), budgets.factor);
    auto [order, cond] = stabilizer_N(a);
    emit(json{{"n", order}, {"conductor", cond}}, budgets, format);
  });

  hull->callback([&] {
    auto t = tuple_input(hull_tuple->count() > 0, tuple_str, input, budgets);
    emit(to_json(pure_hull(t)), budgets, format);
  });

  kummer->callback([&] {
    auto t = tuple_input(kummer_tuple->count() > 0, tuple_str, input, budgets);
    if (conductor > budgets.conductor)
      fail(errc::bound_exceeded, "conductor above budget");
    emit(json{{"degree", to_json(kummer_degree(t, n, conductor))}}, budgets,
         format);
  });

  conj->callback([&] {
    json doc = load_doc(input);
    require_schema(doc);
    check_keys(doc, "request", {"schema", "r1", "r2", "context"});
    RadicalTuple r1 =
        radical_from_json(field(doc, "request", "r1"), budgets.factor);
    RadicalTuple r2 =
        radical_from_json(field(doc, "request", "r2"), budgets.factor);
    ConjugacyContext ctx;
    if (doc.contains("context"))
      ctx = context_from_json(doc["context"], budgets.factor);
    if (ctx.conductor > budgets.conductor)
      fail(errc::bound_exceeded, "conductor above budget");
    emit(to_json(roots_conjugate(r1, r2, ctx)), budgets, format);
  });

  stabm->callback([&] {
    auto t = tuple_input(stabm_tuple->count() > 0, tuple_str, input, budgets);
    emit(json{{"m", stabilizing_m(t).first}}, budgets, format);
  });

  auto generators_of = [&](const json& doc) {
    const json& gj = field(doc, "request", "generators");
    if (!gj.is_array())
      fail(errc::malformed_input, "\"generators\" must be an array");
    std::vector<TorusPoint> gens;
    for (const auto& pj : gj) gens.push_back(point_from_json(pj, budgets.factor));
    return gens;
  };

  closure->callback([&] {
    json doc = load_doc(input);
    require_schema(doc);
    check_keys(doc, "request", {"schema", "generators"});
    auto gens = generators_of(doc);
    emit(json{{"components", to_json(closure_components(gens))},
              {"lattice", to_json(relation_lattice(gens))}},
         budgets, format);
  });

  pullback->callback([&] {
    json doc = load_doc(input);
    require_schema(doc);
    check_keys(doc, "request", {"schema", "generators", "d"});
    auto gens = generators_of(doc);
    long dd = pullback_d->count() > 0 ? d
                                      : long_from_json(field(doc, "request", "d"));
    emit(json{{"components", to_json(pullback_components(gens, dd))}}, budgets,
         format);
  });

  backforth->callback([&] {
    CoverPresentation p1, p2;
    if (dom_opt->count() > 0 || cod_opt->count() > 0) {
      if (dom_opt->count() == 0 || cod_opt->count() == 0)
        fail(errc::malformed_input, "--domain and --codomain go together");
      json d1 = load_doc(domain_path);
      json d2 = load_doc(codomain_path);
      require_schema(d1);
      require_schema(d2);
      p1 = presentation_from_json(d1);
      p2 = presentation_from_json(d2);
    } else {
      json doc = load_doc(input);
      require_schema(doc);
      check_keys(doc, "request", {"schema", "domain", "codomain"});
      p1 = presentation_from_json(field(doc, "request", "domain"));
      p2 = presentation_from_json(field(doc, "request", "codomain"));
    }
    emit(to_json(build_isomorphism(p1, p2, budgets.denominator)), budgets,
         format);
  });

  solve->callback([&] {
    json doc = load_doc(input);
    require_schema(doc);
    check_keys(doc, "request", {"schema", "system"});
    emit(to_json(crt_solve(system_from_json(field(doc, "request", "system")))),
         budgets, format);
  });

  sigma->callback([&] {
    json doc = load_doc(input);
    require_schema(doc);
    check_keys(doc, "request", {"schema", "h", "g", "bound"});
    CoverPresentation h = presentation_from_json(field(doc, "request", "h"));
    CoverPresentation g = presentation_from_json(field(doc, "request", "g"));
    long b = sigma_bound->count() > 0 ? bound
             : doc.contains("bound")  ? long_from_json(doc["bound"])
                                      : budgets.denominator;
    if (b > budgets.denominator)
      fail(errc::bound_exceeded, "bound above denominator budget");
    emit(to_json(build_sigma(h, g, b)), budgets, format);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const mulcov::error& e) {
    if (format == "text") {
      std::cout << "error: " << e.what() << "\n";
    } else {
      json out{{"schema", kSchemaVersion},
               {"error", json{{"code", e.code_name()}, {"message", e.what()}}}};
      std::cout << out.dump() << "\n";
    }
    return e.code() == errc::malformed_input ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}

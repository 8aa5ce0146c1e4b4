#include "adelic/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "adelic/global_norm.hpp"
#include "adelic/heights.hpp"
#include "adelic/map_parser.hpp"
#include "adelic/parallel.hpp"
#include "adelic/verify.hpp"
#include "json.hpp"

namespace adelic::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json strings(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

Json map_json(const RationalMap& f) {
  return Json{{"expression", render(f)},
              {"num", strings(f.P().coefficients())},
              {"den", strings(f.Q().coefficients())},
              {"degree", f.degree()}};
}

Json interval_json(const EnergyInterval& e) {
  return Json{{"lo", e.lo}, {"hi", e.hi}, {"width", e.width()}, {"midpoint", e.midpoint()}};
}

Json trend_json(const std::vector<std::pair<int, double>>& t) {
  Json a = Json::array();
  for (const auto& [n, v] : t) a.push_back(Json{{"n", n}, {"value", v}});
  return a;
}

Json config_json(const RunConfig& c) {
  return Json{{"tol", c.tol},
              {"depth", c.depth ? Json(*c.depth) : Json(nullptr)},
              {"samples", c.samples},
              {"seed", std::to_string(c.seed)},
              {"period_max", c.period_max},
              {"telescope_max", c.telescope_max}};
}

void expect_args(const std::vector<std::string>& args, std::size_t lo, std::size_t hi, const char* what) {
  if (args.size() < lo || args.size() > hi) throw UsageError(std::string("expected ") + what);
}

RationalMap map_with_degree(const std::string& source) {
  RationalMap f = parse_map(source);
  if (f.degree() < 2) throw Error(ErrorKind::Domain, "map degree must be at least 2, got " + std::to_string(f.degree()));
  return f;
}

Json norm_command(const std::vector<std::string>& args, const RunConfig& c, Json& input) {
  expect_args(args, 1, 1, "one map");
  const RationalMap f = map_with_degree(args[0]);
  input["map"] = map_json(f);
  NormOptions opt;
  opt.depth = c.depth.value_or(0);
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.n_max = c.period_max;
  const NormReport r = norm_report(f, opt);
  Json levels = Json::array();
  for (const auto& l : r.levels)
    levels.push_back(Json{{"n", l.n},
                          {"energy", l.energy},
                          {"energy_error", l.energy_error},
                          {"lo", l.interval.lo},
                          {"hi", l.interval.hi}});
  Json mc = nullptr, small = nullptr;
  if (r.mc_estimate)
    mc = Json{{"value", r.mc_estimate->value},
              {"std_error", r.mc_estimate->std_error},
              {"samples", r.mc_estimate->samples},
              {"seed", std::to_string(c.seed)}};
  if (r.small_points_estimate)
    small = Json{{"value", r.small_points_estimate->value}, {"trend", trend_json(r.small_points_estimate->trend)}};
  return Json{{"enclosure", interval_json(r.enclosure)},
              {"depth_used", r.depth_used},
              {"levels", levels},
              {"monte_carlo", mc},
              {"small_points", small},
              {"consistency_flags", r.consistency_flags}};
}

Json az_command(const std::vector<std::string>& args, const RunConfig& c, Json& input) {
  expect_args(args, 2, 2, "two maps");
  const RationalMap f = map_with_degree(args[0]), g = map_with_degree(args[1]);
  input["f"] = map_json(f);
  input["g"] = map_json(g);
  AZOptions opt;
  opt.depth = c.depth.value_or(0);
  const AZReport r = az_pairing(f, g, c.period_max, c.telescope_max, c.tol, opt);
  Json out{{"estimate", r.estimate}, {"per_period", trend_json(r.per_period)}};
  out["envelope"] = r.envelope ? Json{{"lo", r.envelope->lo}, {"hi", r.envelope->hi}} : Json(nullptr);
  out["symmetric_check"] = r.symmetric_check ? Json(*r.symmetric_check) : Json(nullptr);
  out["symmetric_difference"] =
      r.symmetric_check ? Json(std::fabs(r.estimate - *r.symmetric_check)) : Json(nullptr);
  return out;
}

Json height_value_json(const HeightValue& h) {
  return Json{{"value", h.value},
              {"error_estimate", h.error_estimate},
              {"method", to_string(h.method)},
              {"steps", h.steps},
              {"flagged", h.flagged}};
}

Json inequalities_json(const HeightInequalityReport& h) {
  Json out{{"lower_slack", h.lower_slack}, {"upper_slack", h.upper_slack}};
  out["floor_slack"] = h.floor_applies ? Json(h.floor_slack) : Json(nullptr);
  out["sqrt_slack"] = h.sqrt_slack;
  out["holds"] = h.holds;
  return out;
}

Json height_command(const std::vector<std::string>& args, const RunConfig& c, Json& input) {
  expect_args(args, 1, 2, "a point and an optional map");
  std::string point = args[0];
  point.erase(0, point.find_first_not_of(" \t\n"));
  point.erase(point.find_last_not_of(" \t\n") + 1);
  std::optional<Rational> rational;
  std::optional<AlgebraicOrbit> orbit;
  if (point == "inf" || point == "infinity") {
    orbit = AlgebraicOrbit::infinity();
    input["point"] = "inf";
  } else {
    const ParsedExpression e = parse_expression(point);
    if (e.den.degree() > 0) throw UsageError("a point is a rational number or a polynomial, not a quotient");
    const Rational scale = 1 / Rational(e.den.coefficients()[0]);
    if (e.num.degree() <= 0) {
      rational = e.num.is_zero() ? Rational(0) : Rational(e.num.coefficients()[0] * scale);
      input["point"] = Json{{"rational", rational->get_str()}};
    } else {
      Integer l = 1;
      for (const auto& x : e.num.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
      std::vector<Integer> coeffs;
      for (const auto& x : e.num.coefficients()) coeffs.emplace_back(x.get_num() * (l / x.get_den()));
      const IntegerPolynomial poly = IntegerPolynomial(coeffs).primitive_part();
      orbit = AlgebraicOrbit(poly);
      input["point"] = Json{{"orbit", poly.to_string()}, {"coefficients", strings(poly.coefficients())}};
    }
  }
  std::optional<RationalMap> g;
  if (args.size() == 2) {
    g = map_with_degree(args[1]);
    input["map"] = map_json(*g);
  }
  Json out;
  if (rational) {
    out["naive_height"] = naive_height(*rational).value;
    out["arakelov_height"] = arakelov_height(*rational).value;
    out["standard_potential"] = standard_potential(*rational);
    out["inequalities"] = inequalities_json(check_height_inequalities(*rational));
    if (g) out["canonical_height"] = height_value_json(canonical_height(*g, *rational, c.telescope_max, c.tol));
  } else {
    out["naive_height"] = naive_height(*orbit).value;
    out["arakelov_height"] = arakelov_height(*orbit).value;
    out["standard_potential"] = standard_potential(*orbit);
    out["inequalities"] = inequalities_json(check_height_inequalities(*orbit));
    if (g) out["canonical_height"] = height_value_json(canonical_height(*g, *orbit, c.telescope_max, c.tol));
  }
  return out;
}

Json factorization_json(const Factorization& f) {
  Json a = Json::array();
  for (const auto& [p, e] : f.factors) a.push_back(Json{{"p", p.get_str()}, {"exponent", e}});
  return a;
}

Json map_info_command(const std::vector<std::string>& args, const RunConfig&, Json& input) {
  expect_args(args, 1, 1, "one map");
  const RationalMap f = parse_map(args[0]);
  input["map"] = map_json(f);
  Json reduction;
  try {
    const ReductionDatum r = reduction_datum(f, true);
    reduction = Json{{"resultant", r.R.get_str()},
                     {"explicit_good_reduction", r.explicit_good_reduction()},
                     {"bad_primes", factorization_json(*r.bad_primes)}};
  } catch (const FactorizationTimeout& t) {
    const ReductionDatum r = reduction_datum(f, false);
    reduction = Json{{"resultant", r.R.get_str()},
                     {"explicit_good_reduction", r.explicit_good_reduction()},
                     {"bad_primes", nullptr},
                     {"factorization_timeout",
                      Json{{"partial", factorization_json(t.partial())}, {"cofactor", t.cofactor().get_str()}}}};
  }
  return Json{{"degree", f.degree()},
              {"deg_p", f.deg_p()},
              {"deg_q", f.deg_q()},
              {"polynomial", f.is_polynomial()},
              {"monic_polynomial", f.is_polynomial() && f.lead_p() == f.lead_q()},
              {"log_norm", log_norm(f)},
              {"arakelov_height", arakelov_height_map(f).value},
              {"default_depth", f.degree() >= 2 ? Json(default_depth(f.degree())) : Json(nullptr)},
              {"reduction", reduction}};
}

Json rows_json(const std::vector<CheckRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back(Json{{"check", r.check}, {"expected", r.expected}, {"got", r.got}, {"slack", r.slack}, {"pass", r.pass()}});
  return a;
}

Json quad_selftest_command(const std::vector<std::string>& args, const RunConfig&, Json&, bool& ok) {
  expect_args(args, 0, 0, "no arguments");
  const auto rows = quad_selftest();
  ok = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass(); });
  return Json{{"pass", ok}, {"checks", rows_json(rows)}};
}

Json verify_command(const std::vector<std::string>& args, const RunConfig& c, Json&, bool& ok,
                    std::string& err) {
  expect_args(args, 0, 0, "no arguments");
  VerifyOptions opt;
  opt.mc_seed = c.seed;
  const auto results = run_acceptance(opt, [&](const CriterionResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "criterion %d (%s): %s in %.2f s of %.0f s\n", r.id, r.title.c_str(),
                  r.pass() ? "pass" : "FAIL", r.seconds, r.budget_seconds);
    err += buf;
  });
  Json criteria = Json::array();
  ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass();
    criteria.push_back(Json{{"id", r.id},
                            {"title", r.title},
                            {"budget_seconds", r.budget_seconds},
                            {"pass", r.pass()},
                            {"checks", rows_json(r.rows)},
                            {"info", r.info}});
  }
  return Json{{"pass", ok}, {"criteria", criteria}};
}

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
    return buf;
  }
  return v.dump();
}

void table(std::ostringstream& os, const Json& checks) {
  for (const auto& r : checks)
    os << (r["pass"].get<bool>() ? "  ok    " : "  FAIL  ") << cell(r["check"]) << "\n        expected "
       << cell(r["expected"]) << ", got " << cell(r["got"]) << ", slack " << cell(r["slack"]) << "\n";
}

void flatten(std::ostringstream& os, const std::string& prefix, const Json& v) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(os, prefix.empty() ? k : prefix + "." + k, x);
  } else if (v.is_array() && !v.empty() && v.front().is_structured()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(os, prefix + "[" + std::to_string(i) + "]", v[i]);
  } else {
    os << prefix << ": " << cell(v) << "\n";
  }
}

std::string text(const std::string& command, const Json& doc) {
  std::ostringstream os;
  if (doc.contains("error")) {
    os << "error (" << cell(doc["error"]["code"]) << "): " << cell(doc["error"]["message"]) << "\n";
    return os.str();
  }
  const Json& result = doc["result"];
  if (command == "quad-selftest") {
    table(os, result["checks"]);
    os << (result["pass"].get<bool>() ? "all checks pass\n" : "some checks FAIL\n");
  } else if (command == "verify") {
    for (const auto& c : result["criteria"]) {
      os << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  " << c["id"].get<int>() << ". "
         << c["title"].get<std::string>() << "\n";
      table(os, c["checks"]);
      for (const auto& i : c["info"]) os << "  info  " << i.get<std::string>() << "\n";
    }
    os << (result["pass"].get<bool>() ? "all criteria pass\n" : "some criteria FAIL\n");
  } else {
    flatten(os, "", doc["input"]);
    flatten(os, "", result);
  }
  return os.str();
}

}  // namespace

std::string RunConfig::validate() const {
  if (!(tol > 0) || !std::isfinite(tol)) return "--tol must be positive";
  if (depth && *depth < 1) return "--depth must be positive";
  if (samples < 1) return "--samples must be positive";
  if (period_max < 1) return "--period-max must be positive";
  if (telescope_max < 1) return "--telescope-max must be positive";
  if (threads && *threads < 1) return "--threads must be positive";
  return "";
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"norm", "az", "height", "map-info", "verify", "quad-selftest"};
  return names;
}

RunOutput run(const std::string& command, const std::vector<std::string>& args, const RunConfig& config) {
  RunOutput out;
  Json doc{{"command", command}, {"version", kVersion}};
  Json input{{"args", args}};
  Json error = nullptr;
  Json result;
  bool ok = true;
  try {
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
      throw UsageError("unknown command \"" + command + "\"");
    if (const std::string problem = config.validate(); !problem.empty()) throw UsageError(problem);
    if (config.threads) set_thread_budget(*config.threads);
    if (command == "norm")
      result = norm_command(args, config, input);
    else if (command == "az")
      result = az_command(args, config, input);
    else if (command == "height")
      result = height_command(args, config, input);
    else if (command == "map-info")
      result = map_info_command(args, config, input);
    else if (command == "quad-selftest")
      result = quad_selftest_command(args, config, input, ok);
    else
      result = verify_command(args, config, input, ok, out.err);
    out.exit_code = ok ? kExitOk : kExitFailure;
  } catch (const UsageError& e) {
    error = Json{{"code", "usage"}, {"message", e.what()}};
    out.exit_code = kExitUsage;
  } catch (const ParseError& e) {
    error = Json{{"code", std::string(error_code(e.kind()))}, {"message", e.what()}, {"offset", e.offset()}};
    out.exit_code = kExitUsage;
  } catch (const PartialAZError& e) {
    error = Json{{"code", std::string(error_code(e.kind()))}, {"message", e.what()}, {"partial", trend_json(e.partial())}};
    out.exit_code = kExitFailure;
  } catch (const Error& e) {
    error = Json{{"code", std::string(error_code(e.kind()))}, {"message", e.what()}};
    out.exit_code = e.kind() == ErrorKind::Domain ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    error = Json{{"code", "internal"}, {"message", e.what()}};
    out.exit_code = kExitFailure;
  }
  doc["input"] = input;
  doc["config"] = config_json(config);
  if (error.is_null())
    doc["result"] = result;
  else
    doc["error"] = error;
  if (!error.is_null()) out.err += "error: " + error["message"].get<std::string>() + "\n";
  out.out = config.format == Format::Json ? doc.dump(2) + "\n" : text(command, doc);
  return out;
}

}  // namespace adelic::cli

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>

#include "adelic/cli.hpp"
#include "adelic/map_parser.hpp"
#include "adelic/verify.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace adelic;
using nlohmann::json;

namespace {

std::size_t error_offset(const std::string& source) {
  try {
    parse_map(source);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return std::string::npos;
}

// Random expression with its exact value at a point; nullopt when a
// division by zero or a pole is hit.
struct Expr {
  std::string text;
  std::function<std::optional<Rational>(const Rational&)> eval;
};

Expr random_expr(testing::Rng& rng, int depth) {
  const long kind = depth <= 0 ? rng.range(0, 1) : rng.range(0, 6);
  if (kind == 0 && rng.range(0, 2) == 0) {
    // Decimal literal with zero padding on both sides of the point.
    const long whole = rng.range(0, 12), cents = rng.range(0, 99);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*ld.%02ld", static_cast<int>(rng.range(1, 3)), whole, cents);
    const Rational c = make_rational(whole * 100 + cents, 100);
    return {buf, [c](const Rational&) { return std::optional<Rational>(c); }};
  }
  if (kind == 0) {
    const Rational c = make_rational(rng.range(0, 9), rng.range(1, 4));
    const std::string text = c.get_den() == 1 ? c.get_str() : "(" + c.get_str() + ")";
    return {text, [c](const Rational&) { return std::optional<Rational>(c); }};
  }
  if (kind == 1) return {"z", [](const Rational& x) { return std::optional<Rational>(x); }};
  if (kind == 2) {
    Expr a = random_expr(rng, depth - 1);
    return {"-" + a.text, [a](const Rational& x) -> std::optional<Rational> {
              auto v = a.eval(x);
              if (!v) return std::nullopt;
              return Rational(-*v);
            }};
  }
  if (kind == 3) {
    Expr a = random_expr(rng, depth - 1);
    const long k = rng.range(-2, 3);
    return {"(" + a.text + ")^" + (k < 0 ? "(" + std::to_string(k) + ")" : std::to_string(k)),
            [a, k](const Rational& x) -> std::optional<Rational> {
              auto v = a.eval(x);
              if (!v || (k < 0 && *v == 0)) return std::nullopt;
              Rational r = 1;
              for (long i = 0; i < std::labs(k); ++i) r *= *v;
              return k < 0 ? Rational(1 / r) : r;
            }};
  }
  Expr a = random_expr(rng, depth - 1), b = random_expr(rng, depth - 1);
  const char o = "+-*/"[rng.range(0, 3)];
  return {"(" + a.text + " " + o + " " + b.text + ")",
          [a, b, o](const Rational& x) -> std::optional<Rational> {
            auto u = a.eval(x), v = b.eval(x);
            if (!u || !v) return std::nullopt;
            switch (o) {
              case '+': return Rational(*u + *v);
              case '-': return Rational(*u - *v);
              case '*': return Rational(*u * *v);
              default:
                if (*v == 0) return std::nullopt;
                return Rational(*u / *v);
            }
          }};
}

json run_json(const std::string& command, const std::vector<std::string>& args, const cli::RunConfig& c,
              int* code = nullptr) {
  const cli::RunOutput out = cli::run(command, args, c);
  if (code) *code = out.exit_code;
  return json::parse(out.out);
}

}  // namespace

TEST_CASE("parser examples") {
  CHECK(parse_map("z^2 - 2") == chebyshev(2));
  CHECK(parse_map("(x^2+6)^2/(4*x*(x-2)*(x+3))") == lattes(2, 3));
  CHECK(parse_map("(2*z^2+2)/(4*z)") ==
        normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2}));
  const ParsedExpression zero = parse_expression("z^2 - z^2");
  CHECK(zero.num.is_zero());
  try {
    parse_map("z^2 - z^2");
    FAIL("expected a degenerate-map error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateMap);
  }
}

TEST_CASE("parser folds constants exactly") {
  CHECK(parse_map("(1/3)*z^2 + 0.5") ==
        normalize(std::vector<Rational>{Rational(1, 2), 0, Rational(1, 3)}, std::vector<Rational>{1}));
  CHECK(parse_map("2^3^2*z^2") == normalize(IntegerPolynomial{0, 0, 512}, IntegerPolynomial{1}));
  CHECK(parse_map("z^-2") == power_map(-2));
  CHECK(parse_map("\xE2\x88\x92z^2 + 1") == normalize(IntegerPolynomial{1, 0, -1}, IntegerPolynomial{1}));
  CHECK(parse_map("-z^2") == normalize(IntegerPolynomial{0, 0, -1}, IntegerPolynomial{1}));
  CHECK(parse_map("(z - 1)*(z + 1)/(z - 1)") == normalize(IntegerPolynomial{1, 1}, IntegerPolynomial{1}));
  CHECK(parse_map("z^2 - 0.75") == normalize(IntegerPolynomial{-3, 0, 4}, IntegerPolynomial{4}));
  CHECK(parse_map("010*z^2 + 0.08") == normalize(std::vector<Rational>{Rational(2, 25), 0, 10}, std::vector<Rational>{1}));
  CHECK(parse_map("z^2 + .5") == parse_map("z^2 + 1/2"));
  CHECK(parse_map("123456789012345678901234567890*z^2").lead_p() == Integer("123456789012345678901234567890"));
}

TEST_CASE("parser errors carry byte offsets") {
  CHECK(error_offset("z^2 + * 3") == 6);
  CHECK(error_offset("(z + 1") == 6);
  CHECK(error_offset("z^y") == 2);
  CHECK(error_offset("2z") == 1);
  CHECK(error_offset("z + x") == 4);
  CHECK(error_offset("1/(z - z)") == 1);
  CHECK(error_offset("z^(1/2)") == 2);
  CHECK(error_offset("z^z") == 2);
  CHECK(error_offset("") == 0);
  CHECK(error_offset("z^") == 2);
  CHECK(error_offset("z^2 )") == 4);
  CHECK(error_offset("sin(z)") == 0);
  CHECK(error_offset("z^100000") == 2);
}

TEST_CASE("json coefficient form") {
  CHECK(parse_map(R"({"num": [-2, 0, 1]})") == chebyshev(2));
  CHECK(parse_map(R"({"num": ["1", 0, "1"], "den": [0, "2"]})") ==
        normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2}));
  CHECK(parse_map(R"({"num": ["1/2", 0, 1], "den": [1]})") ==
        normalize(IntegerPolynomial{1, 0, 2}, IntegerPolynomial{2}));
  CHECK(parse_map(R"({"num": ["-123456789012345678901234567890", 0, 1]})").P().coeff(0) ==
        Integer("-123456789012345678901234567890"));
  CHECK_THROWS_AS(parse_map(R"({"num": [0.5, 0, 1]})"), ParseError);
  CHECK_THROWS_AS(parse_map(R"({"num": [1, 0, 1], "denominator": [1]})"), ParseError);
  CHECK_THROWS_AS(parse_map(R"({"den": [1]})"), ParseError);
  CHECK_THROWS_AS(parse_map(R"({"num": ["z"]})"), ParseError);
  CHECK(error_offset(R"({"num": [1, 0, 1)") > 0);
}

TEST_CASE("render round-trips through the parser") {
  std::vector<RationalMap> maps = example_maps();
  testing::Rng rng(91);
  for (int t = 0; t < 60; ++t) {
    const int d = static_cast<int>(rng.range(1, 5));
    try {
      maps.push_back(normalize(rng.polynomial(d, 1000), rng.polynomial(static_cast<int>(rng.range(0, d)), 1000)));
    } catch (const Error&) {
    }
  }
  for (const auto& f : maps) {
    CAPTURE(render(f));
    CHECK(parse_map(render(f)) == f);
    CHECK(parse_map(render(f, 'x')) == f);
  }
}

TEST_CASE("parsed expressions evaluate like the expression tree") {
  testing::Rng rng(92);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const Expr e = random_expr(rng, 4);
    CAPTURE(e.text);
    RationalMap f;
    try {
      f = parse_map(e.text);
    } catch (const ParseError& err) {
      // Only a constant subexpression dividing by zero may be rejected.
      CHECK(std::string(err.what()).find("division by zero") != std::string::npos);
      for (int k = 0; k < 5; ++k) CHECK(!e.eval(make_rational(rng.range(-20, 20), rng.range(1, 7))));
      continue;
    } catch (const Error&) {
      continue;  // constant
    }
    for (int k = 0; k < 5; ++k) {
      const Rational x = make_rational(rng.range(-20, 20), rng.range(1, 7));
      const auto expect = e.eval(x);
      const auto got = evaluate(f, x);
      if (!expect || !got) continue;
      CHECK(*got == *expect);
      ++checked;
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("run: exit codes and error fields") {
  cli::RunConfig c;
  c.samples = 2000;
  c.period_max = 4;
  int code = -1;
  json j = run_json("nope", {}, c, &code);
  CHECK(code == cli::kExitUsage);
  CHECK(j["error"]["code"] == "usage");

  run_json("norm", {}, c, &code);
  CHECK(code == cli::kExitUsage);

  j = run_json("norm", {"z^2 + * 3"}, c, &code);
  CHECK(code == cli::kExitUsage);
  CHECK(j["error"]["offset"] == 6);

  j = run_json("norm", {"z^2 - z^2"}, c, &code);
  CHECK(code == cli::kExitFailure);
  CHECK(j["error"]["code"] == "degenerate-map");

  run_json("norm", {"z + 1"}, c, &code);
  CHECK(code == cli::kExitUsage);

  cli::RunConfig bad = c;
  bad.tol = 0;
  run_json("norm", {"z^2"}, bad, &code);
  CHECK(code == cli::kExitUsage);
  bad = c;
  bad.depth = 0;
  run_json("norm", {"z^2"}, bad, &code);
  CHECK(code == cli::kExitUsage);

  j = run_json("map-info", {"{\"num\": [1, 0, 1], \"den\": [0, 2]}"}, c, &code);
  CHECK(code == cli::kExitOk);
  CHECK(j["result"]["degree"] == 2);
}

TEST_CASE("run: norm, az, height and map-info outputs") {
  cli::RunConfig c;
  c.depth = 2;
  c.samples = 20000;
  int code = -1;
  json n = run_json("norm", {"z^2-2"}, c, &code);
  REQUIRE(code == cli::kExitOk);
  const double lo = n["result"]["enclosure"]["lo"], hi = n["result"]["enclosure"]["hi"];
  const double golden = std::log((3 + std::sqrt(5.0)) / 2);
  CHECK(lo <= golden);
  CHECK(golden <= hi);
  CHECK(n["result"]["depth_used"] == 2);
  CHECK(n["result"]["levels"].size() == 2);
  CHECK(n["input"]["map"]["num"] == json::array({"-2", "0", "1"}));
  CHECK(n["config"]["seed"] == "1");

  cli::RunConfig a;
  a.tol = 1e-3;
  json z = run_json("az", {"z^2-2", "z^2"}, a, &code);
  REQUIRE(code == cli::kExitOk);
  CHECK(z["result"].contains("estimate"));
  REQUIRE(z["result"]["envelope"].is_object());
  const double est = z["result"]["estimate"];
  CHECK(z["result"]["envelope"]["lo"].get<double>() <= est);
  CHECK(est <= z["result"]["envelope"]["hi"].get<double>());
  CHECK(z["result"]["per_period"].size() == 8);

  json h = run_json("height", {"3/5", "z^2"}, c, &code);
  REQUIRE(code == cli::kExitOk);
  CHECK(h["result"]["naive_height"].get<double>() == doctest::Approx(std::log(5.0)));
  CHECK(h["result"]["arakelov_height"].get<double>() == doctest::Approx(0.5 * std::log(34.0)));
  CHECK(h["result"]["canonical_height"]["value"].get<double>() == doctest::Approx(std::log(5.0)));
  json o = run_json("height", {"z^2 - 2"}, c, &code);
  REQUIRE(code == cli::kExitOk);
  CHECK(o["result"]["naive_height"].get<double>() == doctest::Approx(0.5 * std::log(2.0)));
  run_json("height", {"1/z"}, c, &code);
  CHECK(code == cli::kExitUsage);

  json m = run_json("map-info", {"z^2 + 12345678901234567890123"}, c, &code);
  REQUIRE(code == cli::kExitOk);
  CHECK(m["input"]["map"]["num"][0] == "12345678901234567890123");
  CHECK(m["result"]["reduction"]["explicit_good_reduction"] == true);
  json half = run_json("map-info", {"z^2/2"}, c, &code);
  CHECK(half["result"]["reduction"]["resultant"] == "4");
  CHECK(half["result"]["reduction"]["bad_primes"][0]["p"] == "2");
}

TEST_CASE("run: byte-identical output independent of threads") {
  cli::RunConfig c;
  c.samples = 16000;
  c.period_max = 6;
  c.seed = 77;
  c.threads = 1;
  const std::string one = cli::run("norm", {"z^2 - 1"}, c).out;
  c.threads = 4;
  const std::string four = cli::run("norm", {"z^2 - 1"}, c).out;
  CHECK(one == four);
  c.seed = 78;
  const std::string other = cli::run("norm", {"z^2 - 1"}, c).out;
  CHECK(one != other);
  cli::RunConfig a;
  a.tol = 1e-3;
  a.period_max = 5;
  a.threads = 1;
  const std::string az1 = cli::run("az", {"z^2-2", "z^2"}, a).out;
  a.threads = 3;
  CHECK(az1 == cli::run("az", {"z^2-2", "z^2"}, a).out);
}

TEST_CASE("run: text format and quadrature self-test") {
  cli::RunConfig c;
  c.format = cli::Format::Text;
  const cli::RunOutput q = cli::run("quad-selftest", {}, c);
  CHECK(q.exit_code == cli::kExitOk);
  CHECK(q.out.find("all checks pass") != std::string::npos);
  const cli::RunOutput m = cli::run("map-info", {"z^2-2"}, c);
  CHECK(m.out.find("reduction.resultant: 1") != std::string::npos);
  const cli::RunOutput e = cli::run("norm", {"z^"}, c);
  CHECK(e.exit_code == cli::kExitUsage);
  CHECK(e.out.rfind("error (parse-error)", 0) == 0);
}

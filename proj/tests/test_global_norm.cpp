#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "adelic/global_norm.hpp"
#include "adelic/parallel.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adelic;

namespace {

const double kLog2 = std::numbers::ln2;
const double kPi = std::numbers::pi;

RationalMap poly_map(std::initializer_list<long> p) { return normalize(IntegerPolynomial(p), IntegerPolynomial{1}); }

// (1/pi) int_0^pi h(2 cos t) dt: the arcsine equilibrium measure on [-2, 2].
double arcsine_average(const std::function<double(double)>& h) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([&](double t) { return h(2 * std::cos(t)); }, 0.0, kPi) / kPi;
}

std::vector<RationalMap> battery() {
  std::vector<RationalMap> maps{power_map(2), power_map(3), chebyshev(2), chebyshev(3),
                                poly_map({-1, 0, 1}),
                                normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2})};
  testing::Rng rng(71);
  while (maps.size() < 10) {
    try {
      maps.push_back(normalize(rng.polynomial(2, 5), rng.polynomial(static_cast<int>(rng.range(0, 2)), 5)));
    } catch (const Error&) {
    }
  }
  return maps;
}

}  // namespace

TEST_CASE("default depth") {
  CHECK(default_depth(2) == 3);
  CHECK(default_depth(3) == 2);
  CHECK(default_depth(4) == 1);
  CHECK(default_depth(9) == 1);
  CHECK_THROWS_AS(default_depth(1), Error);
}

TEST_CASE("chebyshev constant matches the arcsine integral") {
  CHECK(chebyshev_norm_value() == doctest::Approx(0.96242365011920689).epsilon(1e-15));
  const double oracle = arcsine_average([](double x) { return std::log1p(x * x); });
  CHECK(std::fabs(chebyshev_norm_value() - oracle) < 1e-12);
}

TEST_CASE("enclosures of power maps and chebyshev polynomials") {
  for (int d : {2, 3})
    for (int depth = 1; depth <= default_depth(d); ++depth) {
      EnergyInterval e = norm_enclosure(power_map(d), depth);
      CHECK(e.contains(kLog2));
    }
  EnergyInterval t2 = norm_enclosure(chebyshev(2), 3);
  EnergyInterval t3 = norm_enclosure(chebyshev(3), 2);
  CHECK(t2.contains(chebyshev_norm_value()));
  CHECK(t3.contains(chebyshev_norm_value()));
}

TEST_CASE("enclosure bounds hold over the battery and shrink with depth") {
  for (const auto& f : battery()) {
    CAPTURE(render(f));
    const int depth = default_depth(f.degree());
    auto levels = enclosure_levels(f, depth);
    REQUIRE(static_cast<int>(levels.size()) == depth);
    EnergyInterval previous{0.5, std::numeric_limits<double>::infinity()};
    for (int n = 1; n <= depth; ++n) {
      EnergyInterval e = norm_enclosure(f, n);
      CHECK(e.lo >= 0.5 - 1e-9);
      CHECK(e.hi >= kLog2 - 1e-6);
      CHECK(e.lo >= previous.lo);
      CHECK(e.hi <= previous.hi);
      previous = e;
    }
  }
}

TEST_CASE("conjugated power maps") {
  CHECK(closed_form_conjugated_power(1, 0) == doctest::Approx(kLog2).epsilon(1e-14));
  CHECK(closed_form_conjugated_power(2, 0) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK(closed_form_conjugated_power(Rational(1, 2), 0) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK_THROWS_AS(closed_form_conjugated_power(0, 1), Error);
  const std::vector<std::pair<Rational, Rational>> pairs{
      {1, 0}, {2, 0}, {Rational(1, 2), 0}, {1, 1}, {2, 3}};
  for (const auto& [a, b] : pairs) {
    CAPTURE(a.get_str());
    CAPTURE(b.get_str());
    EnergyInterval e = norm_enclosure(conjugate_power_map(2, a, b), 2);
    CHECK(e.contains(closed_form_conjugated_power(a, b)));
  }
}

TEST_CASE("monte carlo estimates") {
  MonteCarloEstimate sq = norm_monte_carlo(power_map(2), 4000, 20, 5);
  CHECK(std::fabs(sq.value - kLog2) < 1e-9);
  CHECK(sq.samples == 4000);

  MonteCarloEstimate t2 = norm_monte_carlo(chebyshev(2), 100000, 20, 11);
  CHECK(t2.std_error > 0);
  CHECK(std::fabs(t2.value - chebyshev_norm_value()) < 3 * t2.std_error);

  RationalMap basilica = poly_map({-1, 0, 1});
  MonteCarloEstimate b = norm_monte_carlo(basilica, 40000, 20, 3);
  EnergyInterval e = norm_enclosure(basilica, 3);
  CHECK(e.contains(b.value, 3 * b.std_error));

  CHECK_THROWS_AS(norm_monte_carlo(normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2}), 1000, 20, 1),
                  Error);
  CHECK_THROWS_AS(norm_monte_carlo(poly_map({0, 0, 2}), 1000, 20, 1), Error);
}

TEST_CASE("monte carlo is deterministic and independent of the thread budget") {
  const int saved = thread_budget();
  set_thread_budget(1);
  MonteCarloEstimate a = norm_monte_carlo(chebyshev(2), 8000, 20, 42);
  set_thread_budget(4);
  MonteCarloEstimate b = norm_monte_carlo(chebyshev(2), 8000, 20, 42);
  set_thread_budget(saved);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  MonteCarloEstimate c = norm_monte_carlo(chebyshev(2), 8000, 20, 43);
  CHECK(a.value != c.value);
}

TEST_CASE("finite-place term of monic rational polynomials") {
  // z^2 + 1/2: |1/2|_2 = 2, so (2/2) log 2.
  RationalMap f = normalize(IntegerPolynomial{1, 0, 2}, IntegerPolynomial{2});
  CHECK(monic_finite_term(f) == doctest::Approx(kLog2).epsilon(1e-14));
  // z^2 + z/6: primes 2 and 3.
  RationalMap g = normalize(IntegerPolynomial{0, 1, 6}, IntegerPolynomial{6});
  CHECK(monic_finite_term(g) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(monic_finite_term(chebyshev(2)) == 0);
  MonteCarloEstimate mc = norm_monte_carlo(f, 20000, 20, 9);
  EnergyInterval e = norm_enclosure(f, 3);
  CHECK(e.contains(mc.value, 3 * mc.std_error));
}

TEST_CASE("periodic orbits match the expanded polynomial") {
  for (const auto& f : {chebyshev(2), poly_map({-1, 0, 1}), lattes(1, 2),
                        normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2})}) {
    for (int n = 1; n <= 3; ++n) {
      CAPTURE(render(f));
      CAPTURE(n);
      AlgebraicOrbit orbit = periodic_orbit(f, n);
      ComplexRootSet direct = complex_roots(orbit.defining_poly());
      CHECK(orbit.roots().residual_bound <= kRootTolerance);
      CHECK(testing::multiset_distance(orbit.roots().roots, direct.roots) < 1e-7);
    }
  }
}

TEST_CASE("small points") {
  // Period-n points of z^2: 0 and the (2^n - 1)-th roots of unity.
  SmallPointsEstimate sq = norm_small_points(power_map(2), 6);
  REQUIRE(sq.trend.size() == 6);
  for (const auto& [n, v] : sq.trend)
    CHECK(std::fabs(v - (1 - std::ldexp(1.0, -n)) * kLog2) < 1e-10);

  SmallPointsEstimate t2 = norm_small_points(chebyshev(2), 8);
  CHECK(std::fabs(t2.value - chebyshev_norm_value()) < 0.05);
  CHECK(t2.value >= kLog2);

  CHECK_THROWS_AS(norm_small_points(chebyshev(2), 11), Error);
  CHECK_THROWS_AS(norm_small_points(chebyshev(2), 0), Error);
}

TEST_CASE("estimators agree on monic polynomials") {
  for (const auto& f : {power_map(2), chebyshev(2), poly_map({-1, 0, 1}), power_map(3)}) {
    CAPTURE(render(f));
    NormOptions opt;
    opt.samples = 40000;
    opt.n_max = 6;
    NormReport r = norm_report(f, opt);
    REQUIRE(r.mc_estimate);
    REQUIRE(r.small_points_estimate);
    const double slack = std::max({r.enclosure.width(), 3 * r.mc_estimate->std_error, 0.05});
    CHECK(std::fabs(r.mc_estimate->value - r.small_points_estimate->value) <= slack);
    CHECK(std::fabs(r.mc_estimate->value - r.enclosure.midpoint()) <= slack);
    CHECK(r.mc_estimate->value >= kLog2 - 3 * r.mc_estimate->std_error);
    CHECK(r.small_points_estimate->value >= kLog2 - 0.05);
  }
}

TEST_CASE("norm report flags") {
  NormOptions opt;
  opt.samples = 1000;
  opt.n_max = 8;
  NormReport r = norm_report(normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2}), opt);
  CHECK(!r.mc_estimate);
  CHECK(std::find(r.consistency_flags.begin(), r.consistency_flags.end(),
                  "mc-skipped-not-monic-polynomial") != r.consistency_flags.end());
  NormReport c = norm_report(power_map(3), opt);
  CHECK(c.depth_used == 2);
  CHECK(std::find(c.consistency_flags.begin(), c.consistency_flags.end(), "small-points-capped") !=
        c.consistency_flags.end());
  CHECK(c.small_points_estimate->trend.size() == 6);
}

TEST_CASE("arakelov-zhang pairing") {
  AZReport same = az_pairing(power_map(2), power_map(2), 6, 8, 1e-6);
  CHECK(std::fabs(same.estimate) < 1e-6);
  REQUIRE(same.envelope);

  const double tol = 1e-3;
  AZReport r = az_pairing(chebyshev(2), power_map(2), 8, 8, tol);
  REQUIRE(r.envelope);
  REQUIRE(r.symmetric_check);
  CHECK(r.envelope->contains(r.estimate));
  CHECK(std::fabs(r.estimate - *r.symmetric_check) < 5 * tol);
  // Weil height of equidistributed points of [-2, 2].
  const double oracle = arcsine_average([](double x) { return std::log(std::max(1.0, std::fabs(x))); });
  CHECK(std::fabs(r.estimate - oracle) < tol);
  const double exact = chebyshev_norm_value();
  CHECK(r.estimate >= 0.5 * (exact - kLog2) - tol);
  CHECK(r.estimate <= 0.5 * exact + tol);

  for (const auto& f : {power_map(3), chebyshev(2)}) {
    AZOptions opt;
    opt.symmetric = false;
    AZReport self = az_pairing(f, f, 5, 12, tol, opt);
    CHECK(std::fabs(self.estimate) < tol);
    CHECK(self.estimate >= -tol);
  }
}

TEST_CASE("explicit bounds") {
  std::vector<RationalMap> maps{power_map(2), chebyshev(2), chebyshev(3), chebyshev(4)};
  testing::Rng rng(73);
  while (maps.size() < 24) {
    const int d = static_cast<int>(rng.range(2, 3));
    try {
      maps.push_back(normalize(rng.polynomial(d, 9), rng.polynomial(static_cast<int>(rng.range(0, d)), 9)));
    } catch (const Error&) {
    }
  }
  for (const auto& f : maps) {
    CAPTURE(render(f));
    ExplicitBoundsReport r = verify_explicit_bounds(f);
    CHECK(r.holds);
    CHECK(r.lower_slack >= 0);
    CHECK(r.upper_slack >= 0);
  }
}

TEST_CASE("lattes lower bound") {
  LattesReport one = lattes_lower_check(1, 1, {}, 1e-6, 0, 0);
  CHECK(one.bound == 0);
  CHECK(one.enclosure_clears);
  for (auto [a, b] : std::vector<std::pair<long, long>>{{2, 3}, {5, 6}}) {
    LattesReport r = lattes_lower_check(a, b);
    CHECK(r.bound == doctest::Approx(std::log(static_cast<double>(a * b))));
    CHECK(r.enclosure_clears);
    REQUIRE(r.small_points);
    CHECK(r.small_points_clear);
  }
}

#include <cmath>

#include "adelic/rational_map.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adelic;

namespace {

RationalMap random_map(testing::Rng& rng, int d, long bound) {
  for (;;) {
    IntegerPolynomial p = rng.polynomial(d, bound);
    IntegerPolynomial q = rng.polynomial(static_cast<int>(rng.range(0, d)), bound);
    if (rng.range(0, 1)) std::swap(p, q);
    try {
      RationalMap f = normalize(p, q);
      if (f.degree() == d) return f;
    } catch (const Error&) {
    }
  }
}

// Brute-force prime factors by trial division.
std::vector<Integer> trial_primes(Integer n) {
  n = abs(n);
  std::vector<Integer> out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

TEST_CASE("normalize examples") {
  RationalMap f = normalize(std::vector<Rational>{-2, 0, 1}, std::vector<Rational>{1});
  CHECK(f.P() == IntegerPolynomial{-2, 0, 1});
  CHECK(f.Q() == IntegerPolynomial{1});

  RationalMap g = normalize(IntegerPolynomial{2, 0, 2}, IntegerPolynomial{0, 4});
  CHECK(g.P() == IntegerPolynomial{1, 0, 1});
  CHECK(g.Q() == IntegerPolynomial{0, 2});

  RationalMap h = normalize(IntegerPolynomial{-1, 1} * IntegerPolynomial{3, 0, 1},
                            IntegerPolynomial{-1, 1} * IntegerPolynomial{0, -2});
  CHECK(h.degree() == 2);
  CHECK(h.P() == IntegerPolynomial{-3, 0, -1});
  CHECK(h.Q() == IntegerPolynomial{0, 2});

  CHECK_THROWS_AS(normalize(IntegerPolynomial{-1, 1} * IntegerPolynomial{5},
                            IntegerPolynomial{-1, 1} * IntegerPolynomial{3}),
                  Error);
  CHECK_THROWS_AS(normalize(IntegerPolynomial{}, IntegerPolynomial{1}), Error);

  RationalMap r = normalize(std::vector<Rational>{make_rational(1, 2), 0, make_rational(3, 4)},
                            std::vector<Rational>{make_rational(5, 6)});
  CHECK(r.P() == IntegerPolynomial{6, 0, 9});
  CHECK(r.Q() == IntegerPolynomial{10});
}

TEST_CASE("iterate examples") {
  CHECK(iterate(power_map(2), 2) == power_map(4));
  CHECK(iterate(chebyshev(2), 2).P() == IntegerPolynomial{2, 0, -4, 0, 1});
  CHECK(iterate(chebyshev(2), 2) == chebyshev(4));

  RationalMap f = normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2});
  RationalMap f2 = iterate(f, 2);
  CHECK(f2.degree() == 4);
  testing::Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    Rational x = rng.nonzero_rational(50, 50);
    CHECK(evaluate(f2, x) == evaluate(f, evaluate(f, x)));
  }
  CHECK_THROWS_AS(iterate(power_map(2), 7), Error);
  CHECK_NOTHROW(iterate(power_map(2), 6));
}

TEST_CASE("iterate is associative and has the expected degree") {
  testing::Rng rng(32);
  for (int t = 0; t < 12; ++t) {
    RationalMap f = random_map(rng, static_cast<int>(rng.range(2, 3)), 5);
    const int d = f.degree();
    CHECK(iterate(f, 2).degree() == d * d);
    if (d == 2) CHECK(iterate(f, 4) == iterate(iterate(f, 2), 2));
    RationalMap f3 = iterate(f, 3);
    CHECK(f3.degree() == d * d * d);
    for (int k = 0; k < 20; ++k) {
      Rational x = rng.rational(40, 40);
      auto y = evaluate(f, evaluate(f, x));
      CHECK(evaluate(iterate(f, 2), x) == y);
    }
  }
  RationalMap g = chebyshev(2);
  CHECK(iterate(g, 4) == iterate(iterate(g, 2), 2));
  CHECK(iterate(g, 3) == normalize(compose(iterate(g, 2).P(), g.P()), IntegerPolynomial{1}));
}

TEST_CASE("iterate tracks the content of the homogeneous lift") {
  // P and Q are both (z+1)^2 mod 2 and vanish at (1,1) mod 2, so 2 divides
  // the content of the second iterate of the lift.
  RationalMap f = normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{3, 2, 1});
  IntegerPolynomial p2 = pow(f.P(), 2) + pow(f.Q(), 2);
  IntegerPolynomial q2 = pow(f.P(), 2) + f.P() * f.Q() * Integer(2) + pow(f.Q(), 2) * Integer(3);
  Integer c = p2.content();
  Integer cq = q2.content();
  mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cq.get_mpz_t());
  CHECK(c % 2 == 0);
  MapIterate it = iterate_with_lift(f, 2);
  CHECK(it.log_content == doctest::Approx(std::log(c.get_d())));
  CHECK(it.map == normalize(p2, q2));
  MapIterate it3 = iterate_with_lift(f, 3);
  CHECK(it3.log_content > 2 * it.log_content - 1e-12);
}

TEST_CASE("named families") {
  CHECK(chebyshev(2).P() == IntegerPolynomial{-2, 0, 1});
  CHECK(chebyshev(3).P() == IntegerPolynomial{0, -3, 0, 1});
  CHECK(chebyshev(4).P() == IntegerPolynomial{2, 0, -4, 0, 1});

  RationalMap l11 = lattes(1, 1);
  CHECK(l11.P() == IntegerPolynomial{1, 0, 2, 0, 1});
  CHECK(l11.Q() == IntegerPolynomial{0, -4, 0, 4});
  RationalMap l12 = lattes(1, 2);
  CHECK(l12.P() == IntegerPolynomial{4, 0, 4, 0, 1});
  CHECK(l12.Q() == IntegerPolynomial{0, -8, 4, 4});
  CHECK(lattes(5, 6).degree() == 4);

  CHECK(conjugate_power_map(2, 1, 0) == power_map(2));
  CHECK(conjugate_power_map(3, 1, 0) == power_map(3));
  CHECK(conjugate_power_map(-2, 1, 0) == power_map(-2));
  CHECK(conjugate_power_map(2, 2, 0).P() == IntegerPolynomial{0, 0, 2});
  CHECK(conjugate_power_map(2, 1, 1).P() == IntegerPolynomial{0, 2, 1});
}

TEST_CASE("conjugated power maps commute with the conjugacy") {
  testing::Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    Rational a = rng.nonzero_rational(5, 5), b = rng.rational(5, 5);
    for (int d : {2, 3, -2}) {
      RationalMap f = conjugate_power_map(d, a, b);
      CHECK(f.degree() == std::abs(d));
      for (int k = 0; k < 5; ++k) {
        Rational z = rng.rational(20, 20);
        Rational phi = a * z + b;
        if (phi == 0) continue;
        Rational pd = 1;
        for (int i = 0; i < std::abs(d); ++i) pd *= phi;
        if (d < 0) pd = 1 / pd;
        Rational expect = (pd - b) / a;
        expect.canonicalize();
        CHECK(evaluate(f, z) == expect);
      }
    }
  }
}

TEST_CASE("reduction datum") {
  ReductionDatum t2 = reduction_datum(chebyshev(2), true);
  CHECK(abs(t2.R) == 1);
  CHECK(t2.bad_primes->factors.empty());

  RationalMap half = normalize(IntegerPolynomial{0, 0, 1}, IntegerPolynomial{2});
  ReductionDatum h = reduction_datum(half, true);
  CHECK(abs(h.R) == 4);
  REQUIRE(h.bad_primes->factors.size() == 1);
  CHECK(h.bad_primes->factors[0].first == 2);

  for (auto [a, b] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{5, 6}}) {
    ReductionDatum l = reduction_datum(lattes(a, b), true);
    std::vector<Integer> mine;
    for (const auto& [p, e] : l.bad_primes->factors) mine.push_back(p);
    CHECK(mine == trial_primes(l.R));
  }
}

TEST_CASE("homogeneous lift matches exact iteration") {
  testing::Rng rng(34);
  for (int t = 0; t < 10; ++t) {
    RationalMap f = random_map(rng, 2, 4);
    HomogeneousLift lift(f);
    Rational x = rng.rational(9, 9);
    // Exact F^4(p, q) with integer lift.
    Integer X = x.get_num(), Y = x.get_den();
    for (int k = 0; k < 4; ++k) {
      Integer nx = 0, ny = 0;
      for (int i = 0; i <= 2; ++i) {
        Integer xi, yi;
        mpz_pow_ui(xi.get_mpz_t(), X.get_mpz_t(), i);
        mpz_pow_ui(yi.get_mpz_t(), Y.get_mpz_t(), 2 - i);
        nx += f.a(i) * xi * yi;
        ny += f.b(i) * xi * yi;
      }
      X = nx;
      Y = ny;
    }
    double expect = log_abs(std::max<Integer>(abs(X), abs(Y)));
    std::complex<long double> x0(x.get_num().get_d(), 0), y0(x.get_den().get_d(), 0);
    CHECK(static_cast<double>(lift.log_norm_iterate(x0, y0, 4)) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("render and log norm") {
  CHECK(render(chebyshev(2)) == "z^2 - 2");
  CHECK(render(normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2})) == "(z^2 + 1)/(2*z)");
  CHECK(log_norm(chebyshev(2)) == doctest::Approx(0.5 * std::log(6.0)));
}

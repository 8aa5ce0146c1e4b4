#include <cmath>

#include "adelic/exact.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace adelic;

TEST_CASE("log_abs at archimedean and prime places") {
  CHECK(log_abs(Rational(8), Place::prime(2)) == doctest::Approx(-3 * std::log(2.0)));
  CHECK(log_abs(make_rational(3, 4), Place::archimedean()) == doctest::Approx(std::log(0.75)));
  CHECK(log_abs(make_rational(1, 9), Place::prime(3)) == doctest::Approx(2 * std::log(3.0)));
  CHECK_THROWS_AS(log_abs(Rational(0), Place::archimedean()), Error);
  CHECK_THROWS_AS(Place::prime(91), Error);
}

TEST_CASE("product formula residual") {
  CHECK(std::fabs(product_formula_residual(make_rational(6, 35))) < 1e-14);
  CHECK(std::fabs(product_formula_residual(Rational(-1))) < 1e-14);
  Integer two100, three99;
  mpz_ui_pow_ui(two100.get_mpz_t(), 2, 100);
  mpz_ui_pow_ui(three99.get_mpz_t(), 3, 99);
  CHECK(std::fabs(product_formula_residual(make_rational(two100, three99))) < 1e-12);
}

TEST_CASE("product formula over random rationals") {
  testing::Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    Rational x = rng.nonzero_rational(1000000, 1000000);
    double s = log_abs(x, Place::archimedean());
    for (const auto& p : prime_support(x)) s += log_abs(x, Place::prime(p));
    CHECK(std::fabs(s) < 1e-12);
  }
}

TEST_CASE("valuations are additive at prime places") {
  testing::Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    Rational x = rng.nonzero_rational(5000, 5000), y = rng.nonzero_rational(5000, 5000);
    for (long p : {2L, 3L, 5L, 7L}) {
      Integer pp(p);
      CHECK(valuation(Rational(x * y), pp) == valuation(x, pp) + valuation(y, pp));
    }
  }
}

TEST_CASE("factorize small examples") {
  Factorization f = factorize(360);
  CHECK(f.unit_sign == 1);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == std::make_pair(Integer(2), 3UL));
  CHECK(f.factors[1] == std::make_pair(Integer(3), 2UL));
  CHECK(f.factors[2] == std::make_pair(Integer(5), 1UL));

  Factorization g = factorize(-17);
  CHECK(g.unit_sign == -1);
  REQUIRE(g.factors.size() == 1);
  CHECK(g.factors[0].first == 17);

  CHECK(factorize(1).factors.empty());
}

TEST_CASE("factorize 2^64 + 1 with the second stage") {
  Integer n;
  mpz_ui_pow_ui(n.get_mpz_t(), 2, 64);
  n += 1;
  Factorization f = factorize(n);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].first == 274177);
  CHECK(f.factors[1].first == Integer("67280421310721"));
  CHECK(f.product() == n);
}

TEST_CASE("factorize reconstructs its input") {
  testing::Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    Integer n = Integer(static_cast<unsigned long>(rng.next() >> 4)) * rng.nonzero(-1000, 1000);
    Factorization f = factorize(n);
    CHECK(f.product() == n);
    for (std::size_t i = 1; i < f.factors.size(); ++i)
      CHECK(f.factors[i - 1].first < f.factors[i].first);
    for (const auto& [p, e] : f.factors) CHECK(is_probable_prime(p));
  }
}

TEST_CASE("factorization timeout carries the partial result") {
  // 2 * 3 * (product of two 40-bit primes): rho needs far more than 60 steps.
  Integer p, q, base;
  mpz_ui_pow_ui(base.get_mpz_t(), 2, 40);
  mpz_nextprime(p.get_mpz_t(), base.get_mpz_t());
  mpz_nextprime(q.get_mpz_t(), p.get_mpz_t());
  Integer n = Integer(6) * p * q;
  try {
    factorize(n, 60);
    FAIL("expected a timeout");
  } catch (const FactorizationTimeout& e) {
    CHECK(e.code() == "factorization-timeout");
    CHECK(e.partial().product() * e.cofactor() == n);
  }
}

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adelic/error.hpp"

namespace adelic {

using Integer = mpz_class;
// mpq_class keeps numerator and denominator coprime with a positive
// denominator once canonicalized; every constructor below does that.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
Rational parse_rational(const std::string& text);

// Natural log of |n| for arbitrarily large n, n != 0.
double log_abs(const Integer& n);

bool is_probable_prime(const Integer& n);

class Place {
 public:
  static Place archimedean() { return Place(); }
  // Throws a domain error unless p passes the primality test.
  static Place prime(const Integer& p);

  bool is_archimedean() const { return archimedean_; }
  const Integer& p() const { return p_; }
  std::string to_string() const;

  friend bool operator==(const Place& a, const Place& b) {
    return a.archimedean_ == b.archimedean_ && a.p_ == b.p_;
  }

 private:
  Place() = default;
  bool archimedean_ = true;
  Integer p_ = 0;
};

struct Factorization {
  int unit_sign = 1;
  std::vector<std::pair<Integer, unsigned long>> factors;

  Integer product() const;
};

class FactorizationTimeout : public Error {
 public:
  FactorizationTimeout(Factorization partial, Integer cofactor)
      : Error(ErrorKind::FactorizationTimeout,
              "factorization budget exhausted; unfactored cofactor " +
                  cofactor.get_str()),
        partial_(std::move(partial)),
        cofactor_(std::move(cofactor)) {}

  // Primes found before the budget ran out, and the composite left over.
  const Factorization& partial() const { return partial_; }
  const Integer& cofactor() const { return cofactor_; }

 private:
  Factorization partial_;
  Integer cofactor_;
};

constexpr std::uint64_t kDefaultFactorBudget = 10'000'000;

Factorization factorize(const Integer& n,
                        std::uint64_t budget = kDefaultFactorBudget,
                        std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

// v_p(n); n != 0.
long valuation(const Integer& n, const Integer& p);
long valuation(const Rational& x, const Integer& p);

double log_abs(const Rational& x, const Place& v);

// Primes dividing the numerator or denominator, increasing.
std::vector<Integer> prime_support(const Rational& x,
                                   std::uint64_t budget = kDefaultFactorBudget);

double product_formula_residual(const Rational& x,
                                std::uint64_t budget = kDefaultFactorBudget);

}  // namespace adelic

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "adelic/exact.hpp"
#include "adelic/polynomial.hpp"

namespace adelic {

// f = P/Q with P, Q coprime, joint content 1 and the leading coefficient of
// Q positive.
class RationalMap {
 public:
  const IntegerPolynomial& P() const { return p_; }
  const IntegerPolynomial& Q() const { return q_; }
  int degree() const { return std::max(p_.degree(), q_.degree()); }
  int deg_p() const { return p_.degree(); }
  int deg_q() const { return q_.degree(); }
  const Integer& lead_p() const { return p_.lead(); }
  const Integer& lead_q() const { return q_.lead(); }

  // Coefficient i of the homogeneous lift, i.e. of P resp. Q padded to d.
  Integer a(int i) const { return p_.coeff(i); }
  Integer b(int i) const { return q_.coeff(i); }

  bool is_polynomial() const { return q_.degree() == 0; }

  friend bool operator==(const RationalMap& x, const RationalMap& y) {
    return x.p_ == y.p_ && x.q_ == y.q_;
  }

  friend RationalMap normalize(const IntegerPolynomial& num, const IntegerPolynomial& den);

 private:
  IntegerPolynomial p_, q_;
};

RationalMap normalize(const IntegerPolynomial& num, const IntegerPolynomial& den);
RationalMap normalize(const std::vector<Rational>& num, const std::vector<Rational>& den);
RationalMap normalize(const RationalPolynomial& num, const RationalPolynomial& den);

constexpr long kIterationDegreeCap = 64;

// Homogeneous iterate F^n of the normalized lift of f together with the
// content removed while normalizing.
struct MapIterate {
  RationalMap base;
  int n = 1;
  RationalMap map;        // f^n, normalized
  double log_content = 0;  // log of content(F^n), F the base lift
};

RationalMap iterate(const RationalMap& f, int n, long degree_cap = kIterationDegreeCap);
MapIterate iterate_with_lift(const RationalMap& f, int n, long degree_cap = kIterationDegreeCap);

RationalMap power_map(int d);
RationalMap chebyshev(int d);
RationalMap lattes(const Integer& a, const Integer& b);
// phi^-1(phi(z)^d) with phi(z) = a z + b, |d| >= 2.
RationalMap conjugate_power_map(int d, const Rational& a, const Rational& b);

struct ReductionDatum {
  Integer R;
  std::optional<Factorization> bad_primes;

  bool explicit_good_reduction() const { return abs(R) == 1; }
};

ReductionDatum reduction_datum(const RationalMap& f, bool with_primes,
                               std::uint64_t budget = kDefaultFactorBudget);

// f(x) for rational x; std::nullopt stands for infinity.
std::optional<Rational> evaluate(const RationalMap& f, const std::optional<Rational>& x);

// Textual form accepted by the map parser, e.g. "(z^2 + 1)/(2*z)".
std::string render(const RationalMap& f, char var = 'z');

// ½ log(sum a_i^2 + sum b_i^2)
double log_norm(const RationalMap& f);

// Homogeneous lift evaluator: one step (x, y) -> (P^h(x, y), Q^h(x, y)) in
// long double complex arithmetic, coefficients scaled by 2^-shift.
class HomogeneousLift {
 public:
  using C = std::complex<long double>;

  explicit HomogeneousLift(const RationalMap& f);

  int degree() const { return d_; }
  long shift() const { return shift_; }

  void step(C& x, C& y) const;
  // Same, carrying derivatives with respect to a parameter.
  void step(C& x, C& y, C& dx, C& dy) const;

  // log max(|X_n|, |Y_n|) for (X_n, Y_n) = F^n(x, y), exact lift coefficients;
  // the input is taken as given, not normalized.
  long double log_norm_iterate(C x, C y, int n) const;

 private:
  int d_;
  long shift_;
  std::vector<C> a_, b_;
};

}  // namespace adelic

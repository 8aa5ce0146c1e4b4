#pragma once

#include <complex>
#include <string>
#include <vector>

#include "adelic/exact.hpp"
#include "adelic/roots.hpp"

namespace adelic {

// Dense polynomial over Z, coefficient i multiplies z^i. The zero polynomial
// has no coefficients and degree -1.
class IntegerPolynomial {
 public:
  IntegerPolynomial() = default;
  explicit IntegerPolynomial(std::vector<Integer> coeffs);
  IntegerPolynomial(std::initializer_list<long> coeffs);

  static IntegerPolynomial constant(const Integer& c);
  static IntegerPolynomial monomial(const Integer& c, int k);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Integer>& coefficients() const { return c_; }
  // Zero beyond the degree.
  Integer coeff(int i) const;
  const Integer& lead() const;

  Integer content() const;
  // Divided by the content, sign chosen so the leading coefficient is > 0.
  IntegerPolynomial primitive_part() const;
  bool is_primitive() const;

  IntegerPolynomial derivative() const;
  // z^n F(1/z) for a formal degree n >= degree().
  IntegerPolynomial reversed(int n) const;

  Rational operator()(const Rational& x) const;
  std::complex<long double> eval(std::complex<long double> z) const;

  IntegerPolynomial operator-() const;
  IntegerPolynomial& operator+=(const IntegerPolynomial& o);
  IntegerPolynomial& operator-=(const IntegerPolynomial& o);
  IntegerPolynomial& operator*=(const Integer& c);

  friend IntegerPolynomial operator+(IntegerPolynomial a, const IntegerPolynomial& b) { return a += b; }
  friend IntegerPolynomial operator-(IntegerPolynomial a, const IntegerPolynomial& b) { return a -= b; }
  friend IntegerPolynomial operator*(IntegerPolynomial a, const Integer& c) { return a *= c; }
  friend IntegerPolynomial operator*(const IntegerPolynomial& a, const IntegerPolynomial& b);
  friend bool operator==(const IntegerPolynomial& a, const IntegerPolynomial& b) { return a.c_ == b.c_; }

  std::string to_string(char var = 'z') const;

 private:
  void trim();
  std::vector<Integer> c_;
};

IntegerPolynomial pow(const IntegerPolynomial& f, unsigned k);
IntegerPolynomial compose(const IntegerPolynomial& f, const IntegerPolynomial& g);

// lead(b)^(deg a - deg b + 1) * a mod b.
IntegerPolynomial pseudo_remainder(const IntegerPolynomial& a, const IntegerPolynomial& b);
// a / b when b divides a in Q[z] and the quotient is integral.
IntegerPolynomial exact_quotient(const IntegerPolynomial& a, const IntegerPolynomial& b);
// Primitive gcd with positive leading coefficient.
IntegerPolynomial gcd(const IntegerPolynomial& a, const IntegerPolynomial& b);
IntegerPolynomial squarefree_part(const IntegerPolynomial& f);
// True when a mod p keeps its degree and is coprime to b mod p, which
// implies gcd(a, b) = 1 over Q.
bool coprime_mod(const IntegerPolynomial& a, const IntegerPolynomial& b, unsigned long p);
// True when f mod p keeps its degree and is coprime to f' mod p, which
// implies f is squarefree over Q.
bool squarefree_mod(const IntegerPolynomial& f, unsigned long p);

Integer resultant(const IntegerPolynomial& f, const IntegerPolynomial& g);
Integer resultant_bareiss(const IntegerPolynomial& f, const IntegerPolynomial& g);
Integer resultant_subresultant(const IntegerPolynomial& f, const IntegerPolynomial& g);

// Coefficients as long doubles scaled by 2^-shift so the largest has
// magnitude in [1/2, 1); shift is returned through the pointer.
std::vector<std::complex<long double>> scaled_coefficients(const IntegerPolynomial& f,
                                                           long* shift = nullptr);

constexpr double kRootTolerance = 1e-10;

ComplexRootSet complex_roots(const IntegerPolynomial& f, double tol = kRootTolerance);

// log|lead| + sum log+|alpha_i|.
double mahler_log(const IntegerPolynomial& f, double tol = kRootTolerance);
double mahler_log(const IntegerPolynomial& f, const ComplexRootSet& roots);

class RationalMap;

// Primitive part of Res_z(F(z), P(z) - w Q(z)) as a polynomial in w.
IntegerPolynomial image_polynomial(const IntegerPolynomial& f, const RationalMap& map);

// Polynomial with rational coefficients, used for construction and parsing.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coeffs);
  static RationalPolynomial constant(const Rational& c);
  static RationalPolynomial variable();

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }

  RationalPolynomial& operator+=(const RationalPolynomial& o);
  RationalPolynomial& operator-=(const RationalPolynomial& o);
  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  RationalPolynomial operator-() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

RationalPolynomial pow(const RationalPolynomial& f, unsigned k);

}  // namespace adelic

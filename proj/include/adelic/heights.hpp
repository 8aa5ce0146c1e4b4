#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "adelic/polynomial.hpp"
#include "adelic/rational_map.hpp"

namespace adelic {

// Galois-stable multiset of algebraic points given by a primitive integer
// polynomial, or the point at infinity.
class AlgebraicOrbit {
 public:
  static AlgebraicOrbit infinity();
  static AlgebraicOrbit rational(const Rational& x);
  explicit AlgebraicOrbit(const IntegerPolynomial& defining_poly);
  // Roots supplied by the caller, e.g. from structured root finding.
  AlgebraicOrbit(const IntegerPolynomial& defining_poly, ComplexRootSet roots);

  bool is_infinity() const { return infinity_; }
  const IntegerPolynomial& defining_poly() const { return poly_; }
  int size() const { return infinity_ ? 1 : poly_.degree(); }
  std::optional<Rational> as_rational() const;

  // Computed once on first use, shared between copies.
  const ComplexRootSet& roots() const;

 private:
  AlgebraicOrbit() = default;
  struct Cache {
    std::once_flag once;
    ComplexRootSet roots;
  };
  bool infinity_ = false;
  IntegerPolynomial poly_;
  std::shared_ptr<Cache> cache_;
};

enum class HeightMethod { Exact, RootBased, Telescoped };

struct HeightValue {
  double value = 0;
  double error_estimate = 0;
  HeightMethod method = HeightMethod::Exact;
  // Set when a slightly negative estimate was clamped, or the telescoping
  // stop rule was not met within the step budget.
  bool flagged = false;
  int steps = 0;
};

const char* to_string(HeightMethod m);

HeightValue naive_height(const Rational& x);
HeightValue naive_height(const AlgebraicOrbit& x);

HeightValue arakelov_height(const Rational& x);
HeightValue arakelov_height(const AlgebraicOrbit& x);

HeightValue arakelov_height_map(const RationalMap& f);

constexpr long kHeightBitBudget = 1L << 20;

// lim d^-m h(g^m x), stopping once successive estimates differ by less
// than tol (1 - 1/d).
HeightValue canonical_height(const RationalMap& g, const AlgebraicOrbit& x, int m_max,
                             double tol, long bit_budget = kHeightBitBudget);
HeightValue canonical_height(const RationalMap& g, const Rational& x, int m_max, double tol,
                             long bit_budget = kHeightBitBudget);

// Potential of the uniform measure on the unit circle, summed over places.
double standard_potential(const Rational& x);
double standard_potential(const AlgebraicOrbit& x);

// Real root of x^3 - 3x^2 - x - 1.
double theta_constant();

struct HeightInequalityReport {
  double h = 0, h_ar = 0;
  double lower_slack = 0;   // h - (h_Ar - ½ log 2)
  double upper_slack = 0;   // h_Ar - h
  double floor_slack = 0;   // h_Ar - ½ log 2, only for x != 0, inf
  double sqrt_slack = 0;    // 2h_Ar - log 2 + sqrt(A(h_Ar - ½ log 2)) - h
  bool floor_applies = false;
  bool holds = false;
};

HeightInequalityReport check_height_inequalities(const AlgebraicOrbit& x);
HeightInequalityReport check_height_inequalities(const Rational& x);

}  // namespace adelic

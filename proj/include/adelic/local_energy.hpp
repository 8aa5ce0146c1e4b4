#pragma once

#include <complex>
#include <limits>
#include <variant>
#include <vector>

#include "adelic/exact.hpp"
#include "adelic/quadrature.hpp"
#include "adelic/rational_map.hpp"

namespace adelic {

struct PointAtInfinity {
  friend bool operator==(PointAtInfinity, PointAtInfinity) { return true; }
};

// A point of the projective line: exact rational, complex, or infinity.
// Complex points only make sense at the Archimedean place.
using SpherePoint = std::variant<Rational, Cld, PointAtInfinity>;

bool is_infinity(const SpherePoint& x);
// Same projective point; a rational and a complex point are compared after
// converting the rational.
bool same_point(const SpherePoint& x, const SpherePoint& y);
std::string to_string(const SpherePoint& x);

constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

// -log ||x, y||_v; +infinity when x = y.
double chordal_log(const SpherePoint& x, const SpherePoint& y, const Place& v);

// Closed form of ∫ log|x - z y|_v dλ_Ar,v(z): log sqrt(|x|² + |y|²) at the
// Archimedean place, log max(|x|_p, |y|_p) at p.
double jensen_integral(const Rational& x, const Rational& y, const Place& v);

// The same Archimedean integral by sphere quadrature.
QuadratureValue jensen_quadrature(const Rational& x, const Rational& y,
                                  const SphereQuadrature& quad);

// I = ∫ log sqrt(|P|² + |Q|²) dλ_Ar for the normalized lift of f.
QuadratureValue arch_pullback_integral(const RationalMap& f, const SphereQuadrature& quad);

// Envelope |I - log|f|| <= this, |f| the coefficient 2-norm.
double arch_pullback_envelope(int d);

// ||f^* λ_Ar||²_v; exact at primes (error 0).
QuadratureValue pullback_energy_local(const RationalMap& f, const Place& v,
                                      const SphereQuadrature& quad);

// 2d I - d/2: the sum over all places, since the R terms cancel by the
// product formula and |f|_p = 1 for a normalized map.
QuadratureValue pullback_energy_total(const RationalMap& f, const SphereQuadrature& quad);

struct PlaceEnergy {
  Place place;
  double value = 0;
  double error = 0;
};

struct EnergyBreakdown {
  std::vector<PlaceEnergy> per_place;  // the Archimedean place, then bad primes
  double total = 0;
  double total_error = 0;
  double shortcut = 0;  // pullback_energy_total, computed independently
};

// Place-by-place ||f^* λ_Ar||²; factors the reduction datum and throws a
// numerical error if the sum disagrees with the shortcut beyond 1e-7.
EnergyBreakdown pullback_energy_global(const RationalMap& f, const SphereQuadrature& quad,
                                       std::uint64_t factor_budget = kDefaultFactorBudget);

struct EnergyInterval {
  double lo = 0;
  double hi = 0;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x, double slack = 0) const { return lo - slack <= x && x <= hi + slack; }
};

struct WeightedAtom {
  SpherePoint point;
  double weight = 0;
};

struct WeightedPointMeasure {
  Place place = Place::archimedean();
  std::vector<WeightedAtom> atoms;

  double mass() const;
};

struct DiscreteEnergy {
  double value = 0;
  int diagonal_pairs = 0;  // pairs (x, x) left out of the sum
};

// Σ_{x != y} w_mu(x) w_nu(y) (-log ||x, y||_v).
DiscreteEnergy discrete_energy(const WeightedPointMeasure& mu, const WeightedPointMeasure& nu);

// Energy pairing of the measures obtained by spreading every atom over the
// chordal circle of radius eps around it (Archimedean place). Exact once the
// circles are disjoint, i.e. eps below half the least chordal distance.
double smoothed_energy(const WeightedPointMeasure& mu, const WeightedPointMeasure& nu, double eps);

// Least chordal distance between distinct atoms of the given measures.
double min_chordal_separation(const std::vector<const WeightedPointMeasure*>& measures);

// The d preimages of w with multiplicity (infinity repeated by the degree
// drop of P - wQ).
std::vector<SpherePoint> pullback_points(const RationalMap& f, const SpherePoint& w,
                                         double tol = kRootTolerance);

SpherePoint apply(const RationalMap& f, const SpherePoint& x);

// f^* mu: every atom replaced by its preimages, each carrying its weight.
WeightedPointMeasure pullback_measure(const RationalMap& f, const WeightedPointMeasure& mu);
// f_* mu: every atom moved to its image.
WeightedPointMeasure pushforward_measure(const RationalMap& f, const WeightedPointMeasure& mu);

}  // namespace adelic

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adelic/heights.hpp"
#include "adelic/local_energy.hpp"
#include "adelic/quadrature.hpp"
#include "adelic/rational_map.hpp"

namespace adelic {

// Largest iterate degree used for periodic orbits.
constexpr long kSmallPointsDegreeCap = 1024;

// Depth with d^depth <= 9: 3 for quadratic maps, 2 for cubic, 1 above.
int default_depth(int d);

// Per-iterate enclosures of ||mu_f||² for n = 1..depth, inflated by the
// quadrature error of E_n = ||d^-n (f^n)^* lambda_Ar||².
struct EnclosureLevel {
  int n = 0;
  double energy = 0;        // E_n
  double energy_error = 0;  // quadrature error of E_n
  EnergyInterval interval;
};

std::vector<EnclosureLevel> enclosure_levels(const RationalMap& f, int depth,
                                             const SphereQuadrature& quad = {});

// Intersection of the per-iterate enclosures and the floor 1/2; throws an
// inconsistent enclosure error listing them when it is empty.
EnergyInterval intersect_levels(const std::vector<EnclosureLevel>& levels);

EnergyInterval norm_enclosure(const RationalMap& f, int depth, const SphereQuadrature& quad = {});

struct MonteCarloEstimate {
  double value = 0;
  double std_error = 0;
  long samples = 0;
};

constexpr int kMonteCarloChains = 8;

// Inverse-iteration sampling of the equilibrium measure of a monic
// polynomial: random preimages from 1 + i, burn_in discarded, chain k seeded
// keyed by seed ^ k and k. Standard error by batch means.
MonteCarloEstimate norm_monte_carlo(const RationalMap& f, long samples, int burn_in,
                                    std::uint64_t seed);

// Exact finite-place part (2/d) sum_p log |f|_p of the Monte-Carlo formula.
double monic_finite_term(const RationalMap& f);

// Points of period dividing n: the squarefree part of the primitive part of
// P_n - z Q_n, roots found by Aberth on the iterated lift.
AlgebraicOrbit periodic_orbit(const RationalMap& f, int n,
                              long degree_cap = kSmallPointsDegreeCap);

struct SmallPointsEstimate {
  double value = 0;
  std::vector<std::pair<int, double>> trend;  // (n, 2 h_Ar(orbit_n))
};

SmallPointsEstimate norm_small_points(const RationalMap& f, int n_max,
                                      long degree_cap = kSmallPointsDegreeCap);

// ||mu||² for phi^-1(phi(z)²) with phi(z) = a z + b.
double closed_form_conjugated_power(const Rational& a, const Rational& b);

// log((3 + sqrt 5)/2), for Chebyshev polynomials of every degree.
double chebyshev_norm_value();

struct NormOptions {
  int depth = 0;  // 0: default_depth
  SphereQuadrature quad;
  long samples = 0;  // 0: no Monte Carlo
  int burn_in = 20;
  std::uint64_t seed = 1;
  int n_max = 0;  // 0: no small points
};

struct NormReport {
  EnergyInterval enclosure;
  std::vector<EnclosureLevel> levels;
  std::optional<MonteCarloEstimate> mc_estimate;
  std::optional<SmallPointsEstimate> small_points_estimate;
  int depth_used = 0;
  std::vector<std::string> consistency_flags;
};

// All estimators that apply. Monte Carlo only runs for monic polynomials
// and small points are capped at kSmallPointsDegreeCap; skipped or
// disagreeing estimators are recorded in consistency_flags.
NormReport norm_report(const RationalMap& f, const NormOptions& options);

struct AZReport {
  double estimate = 0;
  std::vector<std::pair<int, double>> per_period;
  std::optional<EnergyInterval> envelope;
  std::optional<double> symmetric_check;
};

// Thrown when a canonical height fails part way; carries the periods done.
class PartialAZError : public Error {
 public:
  PartialAZError(const Error& cause, std::vector<std::pair<int, double>> partial)
      : Error(cause.kind(), cause.what()), partial_(std::move(partial)) {}

  const std::vector<std::pair<int, double>>& partial() const { return partial_; }

 private:
  std::vector<std::pair<int, double>> partial_;
};

struct AZOptions {
  bool symmetric = true;
  int depth = 0;  // for the envelope when g = z^d
  SphereQuadrature quad;
};

// (f, g)_AZ as the canonical height for g of the period-n points of f.
AZReport az_pairing(const RationalMap& f, const RationalMap& g, int n_max, int m_max, double tol,
                    const AZOptions& options = {});

struct ExplicitBoundsReport {
  double h_ar = 0;
  double lower = 0;  // bound on (d/2) ||mu_f||² from below
  double upper = 0;
  EnergyInterval enclosure;
  double lower_slack = 0;  // (d/2) hi - lower
  double upper_slack = 0;  // upper - (d/2) lo
  bool holds = false;
};

ExplicitBoundsReport verify_explicit_bounds(const RationalMap& f, const SphereQuadrature& quad = {},
                                            int depth = 0);

struct LattesReport {
  Integer a, b;
  double bound = 0;  // log(ab)
  EnergyInterval enclosure;
  bool enclosure_clears = false;
  std::optional<double> small_points;
  bool small_points_clear = false;
};

LattesReport lattes_lower_check(const Integer& a, const Integer& b, const SphereQuadrature& quad = {},
                                double tol = 1e-6, int depth = 0, int n_small = 3);

}  // namespace adelic

#include "adelic/global_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "adelic/parallel.hpp"
#include "adelic/roots.hpp"

namespace adelic {

namespace {

using Cl = std::complex<long double>;

constexpr double kLn2 = std::numbers::ln2;

// Total energy of (f^n)^* lambda_Ar with its error; the place-by-place
// breakdown when the reduction datum factors within budget.
QuadratureValue iterate_energy(const RationalMap& fn, const SphereQuadrature& quad) {
  try {
    EnergyBreakdown b = pullback_energy_global(fn, quad);
    return {b.total, b.total_error, 0};
  } catch (const FactorizationTimeout&) {
    return pullback_energy_total(fn, quad);
  }
}

std::string describe(const std::vector<EnclosureLevel>& levels) {
  std::ostringstream os;
  os.precision(12);
  for (const auto& l : levels)
    os << " n=" << l.n << ": [" << l.interval.lo << ", " << l.interval.hi << "]";
  return os.str();
}

// The primitive part of P_n - z Q_n, with the homogeneous lift of f.
struct PeriodicData {
  IntegerPolynomial full;
  IntegerPolynomial squarefree;
};

PeriodicData periodic_polynomial(const RationalMap& f, int n, long degree_cap) {
  RationalMap fn = iterate(f, n, degree_cap);
  IntegerPolynomial g = fn.P() - IntegerPolynomial{0, 1} * fn.Q();
  if (g.is_zero() || g.degree() < 1)
    throw Error(ErrorKind::DegenerateMap,
                "f^" + std::to_string(n) + " has no isolated periodic points (identity-like)");
  g = g.primitive_part();
  return {g, squarefree_part(g)};
}

// Aberth on z -> X_n(z, 1) - z Y_n(z, 1) evaluated by iterating the lift,
// which stays well conditioned where the expanded polynomial is not.
bool structured_roots(const RationalMap& f, int n, const IntegerPolynomial& g,
                      std::vector<Cl>& z) {
  HomogeneousLift lift(f);
  std::vector<double> logs;
  for (const auto& c : g.coefficients())
    logs.push_back(c == 0 ? -std::numeric_limits<double>::infinity() : log_abs(c));
  z = newton_polygon_start(logs);
  // A root at 0 (simple, g being squarefree) is deflated: h = g / z has
  // h / h' = 1 / (g' / g - 1 / z).
  const bool zero_root = g.coeff(0) == 0;
  auto ratio_g = [&](Cl s) {
    Cl x = s, y = 1, dx = 1, dy = 0;
    for (int k = 0; k < n; ++k) {
      lift.step(x, y, dx, dy);
      const long double m = std::max(std::abs(x), std::abs(y));
      if (m == 0 || !std::isfinite(m)) break;
      x /= m;
      y /= m;
      dx /= m;
      dy /= m;
    }
    return (x - s * y) / (dx - y - s * dy);
  };
  auto ratio = [&](Cl s) {
    const Cl r = ratio_g(s);
    return zero_root ? Cl(1) / (Cl(1) / r - Cl(1) / s) : r;
  };
  const int sweeps = aberth_iterate<long double>(ratio, z, 800, 1e-17L);
  if (zero_root) z.emplace_back(0);
  return sweeps >= 0 && static_cast<int>(z.size()) == g.degree();
}

// Distance of value outside e widened by slack; 0 inside.
double outside_by(double value, const EnergyInterval& e, double slack) {
  if (value < e.lo - slack) return e.lo - slack - value;
  if (value > e.hi + slack) return value - e.hi - slack;
  return 0;
}

}  // namespace

int default_depth(int d) {
  if (d < 2) throw Error(ErrorKind::Domain, "norm estimates need degree >= 2");
  return std::max(1, static_cast<int>(std::floor(std::log(9.0) / std::log(d) + 1e-12)));
}

std::vector<EnclosureLevel> enclosure_levels(const RationalMap& f, int depth,
                                             const SphereQuadrature& quad) {
  const int d = f.degree();
  if (d < 2) throw Error(ErrorKind::Domain, "norm_enclosure needs degree >= 2");
  if (depth < 1) throw Error(ErrorKind::Domain, "norm_enclosure needs depth >= 1");
  std::vector<EnclosureLevel> out;
  for (int n = 1; n <= depth; ++n) {
    RationalMap fn = iterate(f, n);
    const double D = std::pow(static_cast<double>(d), n), s = std::sqrt(D);
    QuadratureValue total = iterate_energy(fn, quad);
    EnclosureLevel l;
    l.n = n;
    l.energy = total.value / (D * D);
    l.energy_error = total.error / (D * D);
    const double lo_scale = D / ((s + 1) * (s + 1)), hi_scale = D / ((s - 1) * (s - 1));
    l.interval.lo = (D * l.energy + 0.5) / ((s + 1) * (s + 1)) - lo_scale * l.energy_error;
    l.interval.hi = 0.5 + hi_scale * (l.energy - 0.5) + hi_scale * l.energy_error;
    out.push_back(l);
  }
  return out;
}

EnergyInterval intersect_levels(const std::vector<EnclosureLevel>& levels) {
  // Floor: ||mu||² >= 1/2 for every probability measure.
  EnergyInterval e{0.5, std::numeric_limits<double>::infinity()};
  for (const auto& l : levels) {
    e.lo = std::max(e.lo, l.interval.lo);
    e.hi = std::min(e.hi, l.interval.hi);
  }
  if (e.lo > e.hi)
    throw Error(ErrorKind::InconsistentEnclosure,
                "per-iterate enclosures do not intersect (quadrature error underestimated):" +
                    describe(levels));
  return e;
}

EnergyInterval norm_enclosure(const RationalMap& f, int depth, const SphereQuadrature& quad) {
  return intersect_levels(enclosure_levels(f, depth, quad));
}

double monic_finite_term(const RationalMap& f) {
  const Integer& q = f.Q().lead();
  if (q == 1) return 0;
  double s = 0;
  for (const auto& [p, e] : factorize(q).factors) {
    // max_i (-v_p(a_i / q)), clamped at 0.
    long worst = 0;
    for (const auto& a : f.P().coefficients()) {
      if (a == 0) continue;
      worst = std::max(worst, static_cast<long>(e) - valuation(a, p));
    }
    s += static_cast<double>(worst) * std::log(p.get_d());
  }
  return 2.0 / f.degree() * s;
}

MonteCarloEstimate norm_monte_carlo(const RationalMap& f, long samples, int burn_in,
                                    std::uint64_t seed) {
  if (!f.is_polynomial() || f.lead_p() != f.lead_q())
    throw Error(ErrorKind::UnsupportedMap,
                "Monte Carlo needs a monic polynomial; use norm_enclosure for " + render(f));
  if (samples < 2 * kMonteCarloChains)
    throw Error(ErrorKind::Domain, "Monte Carlo needs at least 16 samples");
  if (burn_in < 0) throw Error(ErrorKind::Domain, "burn_in must be >= 0");
  const int d = f.degree();
  const long double q = f.lead_q().get_d();
  std::vector<Cl> base(d + 1);
  for (int i = 0; i <= d; ++i) base[i] = static_cast<long double>(f.a(i).get_d()) / q;
  base[d] = 1;

  constexpr int kBatches = 10;
  struct Chain {
    long n = 0;
    std::vector<long double> batch_sum;
    std::vector<long> batch_n;
  };
  std::vector<Chain> chains(kMonteCarloChains);
  parallel_for(chains.size(), [&](std::size_t k) {
    Chain& c = chains[k];
    c.n = samples / kMonteCarloChains + (static_cast<long>(k) < samples % kMonteCarloChains);
    c.batch_sum.assign(kBatches, 0);
    c.batch_n.assign(kBatches, 0);
    const std::uint64_t key = seed ^ static_cast<std::uint64_t>(k);
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::vector<Cl> coeffs = base;
    Cl z(1, 1);
    for (long t = 0; t < burn_in + c.n; ++t) {
      coeffs[0] = base[0] - z;
      const ComplexRootSet r = solve_polynomial(coeffs, kRootTolerance);
      const auto& pick = r.roots[rng() % static_cast<std::uint64_t>(d)];
      z = Cl(pick.real(), pick.imag());
      if (t < burn_in) continue;
      const long i = t - burn_in;
      const int b = static_cast<int>(i * kBatches / c.n);
      c.batch_sum[b] += 0.5L * std::log1p(std::norm(z));
      ++c.batch_n[b];
    }
  });

  long double total = 0;
  long count = 0;
  std::vector<long double> means;
  for (const auto& c : chains)
    for (int b = 0; b < kBatches; ++b) {
      total += c.batch_sum[b];
      count += c.batch_n[b];
      if (c.batch_n[b] > 0) means.push_back(c.batch_sum[b] / c.batch_n[b]);
    }
  const long double mean = total / count;
  long double var = 0;
  for (auto m : means) var += (m - mean) * (m - mean);
  var /= static_cast<long double>(means.size() - 1);
  MonteCarloEstimate out;
  out.value = static_cast<double>(2 * mean) + monic_finite_term(f);
  out.std_error = static_cast<double>(2 * std::sqrt(var / means.size()));
  out.samples = count;
  return out;
}

AlgebraicOrbit periodic_orbit(const RationalMap& f, int n, long degree_cap) {
  if (f.degree() < 2) throw Error(ErrorKind::Domain, "periodic orbits need degree >= 2");
  if (n < 1) throw Error(ErrorKind::Domain, "period must be >= 1");
  const PeriodicData data = periodic_polynomial(f, n, degree_cap);
  const IntegerPolynomial& F = data.squarefree;
  if (F.degree() == data.full.degree()) {
    std::vector<Cl> z;
    if (structured_roots(f, n, data.full, z)) {
      long shift = 0;
      const auto coeffs = scaled_coefficients(F, &shift);
      ComplexRootSet set;
      for (const auto& r : z) {
        set.roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
        set.residual_bound = std::max(set.residual_bound, backward_residual(coeffs, r));
      }
      if (set.residual_bound <= kRootTolerance) return AlgebraicOrbit(F, std::move(set));
    }
  }
  return AlgebraicOrbit(F);
}

SmallPointsEstimate norm_small_points(const RationalMap& f, int n_max, long degree_cap) {
  if (n_max < 1) throw Error(ErrorKind::Domain, "n_max must be >= 1");
  if (n_max * std::log(static_cast<double>(f.degree())) > std::log(static_cast<double>(degree_cap)) + 1e-9)
    throw Error(ErrorKind::IterationCap, "degree " + std::to_string(f.degree()) + "^" + std::to_string(n_max) +
                                             " exceeds the iteration cap " + std::to_string(degree_cap));
  SmallPointsEstimate out;
  for (int n = 1; n <= n_max; ++n) {
    const double v = 2 * arakelov_height(periodic_orbit(f, n, degree_cap)).value;
    out.trend.emplace_back(n, v);
    out.value = v;
  }
  return out;
}

double closed_form_conjugated_power(const Rational& a, const Rational& b) {
  if (a == 0) throw Error(ErrorKind::Domain, "closed form needs a != 0");
  // Finite places: primes dividing a denominator of a or b.
  double finite = 0;
  Integer den;
  mpz_lcm(den.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  if (den != 1)
    for (const auto& [p, e] : factorize(den).factors) {
      long worst = 0;  // max(0, -v_p(a), -v_p(b))
      if (a != 0) worst = std::max(worst, -valuation(a, p));
      if (b != 0) worst = std::max(worst, -valuation(b, p));
      finite += 2.0 * static_cast<double>(worst) * std::log(p.get_d());
    }
  const double x = std::fabs(a.get_d()), y = std::fabs(b.get_d());
  const double a2 = x * x;
  const double eta =
      1 + a2 + y * y + std::sqrt((a2 + (1 - y) * (1 - y)) * (a2 + (1 + y) * (1 + y)));
  return -kLn2 + finite + std::log(eta);
}

double chebyshev_norm_value() { return std::log((3 + std::sqrt(5.0)) / 2); }

NormReport norm_report(const RationalMap& f, const NormOptions& options) {
  NormReport r;
  const int d = f.degree();
  r.depth_used = options.depth > 0 ? options.depth : default_depth(d);
  r.levels = enclosure_levels(f, r.depth_used, options.quad);
  r.enclosure = intersect_levels(r.levels);
  if (options.samples > 0) {
    if (f.is_polynomial() && f.lead_p() == f.lead_q()) {
      r.mc_estimate = norm_monte_carlo(f, options.samples, options.burn_in, options.seed);
      if (outside_by(r.mc_estimate->value, r.enclosure, 3 * r.mc_estimate->std_error) > 0)
        r.consistency_flags.push_back("mc-outside-enclosure");
    } else {
      r.consistency_flags.push_back("mc-skipped-not-monic-polynomial");
    }
  }
  if (options.n_max > 0) {
    int n_max = options.n_max;
    while (n_max > 1 && std::pow(static_cast<double>(d), n_max) > kSmallPointsDegreeCap) --n_max;
    if (n_max < options.n_max) r.consistency_flags.push_back("small-points-capped");
    r.small_points_estimate = norm_small_points(f, n_max);
    const auto& trend = r.small_points_estimate->trend;
    const double last_step =
        trend.size() > 1 ? std::fabs(trend.back().second - trend[trend.size() - 2].second) : 0;
    const double slack = std::max(0.05, 3 * last_step);
    if (outside_by(r.small_points_estimate->value, r.enclosure, slack) > 0)
      r.consistency_flags.push_back("small-points-outside-enclosure");
    for (std::size_t i = 2; i < trend.size(); ++i)
      if (std::fabs(trend[i].second - trend[i - 1].second) >
          std::fabs(trend[i - 1].second - trend[i - 2].second) + 1e-12) {
        r.consistency_flags.push_back("small-points-trend-not-contracting");
        break;
      }
  }
  return r;
}

AZReport az_pairing(const RationalMap& f, const RationalMap& g, int n_max, int m_max, double tol,
                    const AZOptions& options) {
  if (f.degree() < 2 || g.degree() < 2)
    throw Error(ErrorKind::Domain, "az_pairing needs degrees >= 2");
  if (n_max < 1) throw Error(ErrorKind::Domain, "n_max must be >= 1");
  auto run = [&](const RationalMap& x, const RationalMap& y) {
    std::vector<std::pair<int, double>> per;
    for (int n = 1; n <= n_max; ++n) {
      try {
        per.emplace_back(n, canonical_height(y, periodic_orbit(x, n), m_max, tol).value);
      } catch (const Error& e) {
        throw PartialAZError(e, per);
      }
    }
    return per;
  };
  AZReport r;
  r.per_period = run(f, g);
  r.estimate = r.per_period.back().second;
  if (g == power_map(g.degree())) {
    const int depth = options.depth > 0 ? options.depth : default_depth(f.degree());
    const EnergyInterval e = norm_enclosure(f, depth, options.quad);
    r.envelope = EnergyInterval{0.5 * (e.lo - kLn2), 0.5 * e.hi};
  }
  if (options.symmetric) r.symmetric_check = run(g, f).back().second;
  return r;
}

ExplicitBoundsReport verify_explicit_bounds(const RationalMap& f, const SphereQuadrature& quad,
                                            int depth) {
  const int d = f.degree();
  ExplicitBoundsReport r;
  r.h_ar = arakelov_height_map(f).value;
  const double s = std::sqrt(static_cast<double>(d));
  r.lower = d / ((s + 1) * (s + 1)) * r.h_ar - 1.5 * d * kLn2;
  r.upper = (2.0 * d + 1) / 4 * kLn2 + std::log(d + 1.0) + d / ((s - 1) * (s - 1)) * r.h_ar;
  r.enclosure = norm_enclosure(f, depth > 0 ? depth : default_depth(d), quad);
  r.lower_slack = 0.5 * d * r.enclosure.hi - r.lower;
  r.upper_slack = r.upper - 0.5 * d * r.enclosure.lo;
  r.holds = r.lower_slack >= 0 && r.upper_slack >= 0;
  return r;
}

LattesReport lattes_lower_check(const Integer& a, const Integer& b, const SphereQuadrature& quad,
                                double tol, int depth, int n_small) {
  const RationalMap f = lattes(a, b);
  LattesReport r;
  r.a = a;
  r.b = b;
  r.bound = log_abs(a * b);
  r.enclosure = norm_enclosure(f, depth > 0 ? depth : default_depth(f.degree()), quad);
  r.enclosure_clears = r.enclosure.hi >= r.bound - tol;
  if (n_small > 0) {
    r.small_points = norm_small_points(f, n_small).value;
    r.small_points_clear = *r.small_points >= r.bound - tol;
  }
  return r;
}

}  // namespace adelic

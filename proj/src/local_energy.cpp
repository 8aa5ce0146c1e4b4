#include "adelic/local_energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "adelic/roots.hpp"

namespace adelic {

namespace {

constexpr long double kLn2 = std::numbers::ln2_v<long double>;
// Dips of psi graded toward: below e^-1 of the typical size and narrower
// than a quarter in chordal terms.
constexpr long double kDipDrop = -1;
constexpr long double kDipWidth = 0.25L;

struct Homogeneous {
  Cld x, y;  // max(|x|, |y|) = 1
};

Homogeneous homogeneous(const SpherePoint& p) {
  if (std::holds_alternative<PointAtInfinity>(p)) return {1, 0};
  Cld z = std::holds_alternative<Rational>(p) ? Cld(std::get<Rational>(p).get_d())
                                               : std::get<Cld>(p);
  if (std::abs(z) <= 1) return {z, 1};
  return {1, Cld(1) / z};
}

// Coprime integer lift (num, den); infinity is (1, 0).
std::pair<Integer, Integer> integer_lift(const SpherePoint& p) {
  if (std::holds_alternative<PointAtInfinity>(p)) return {1, 0};
  const Rational& r = std::get<Rational>(p);
  return {r.get_num(), r.get_den()};
}

bool is_exact(const SpherePoint& p) { return !std::holds_alternative<Cld>(p); }

// Coefficients of P and Q padded to degree d, scaled jointly by 2^-shift.
struct ScaledLift {
  int d;
  long shift;
  std::vector<Cld> a, b;

  explicit ScaledLift(const RationalMap& f) : d(f.degree()) {
    std::vector<Integer> all;
    for (int i = 0; i <= d; ++i) {
      all.push_back(f.a(i));
      all.push_back(f.b(i));
    }
    auto scaled = scaled_coefficients(IntegerPolynomial(all), &shift);
    scaled.resize(all.size(), 0);
    for (int i = 0; i <= d; ++i) {
      a.push_back(scaled[2 * i]);
      b.push_back(scaled[2 * i + 1]);
    }
  }

  struct Value {
    Cld p, q, dp, dq;
  };

  // P, Q and their derivatives at z in the inner chart.
  Value eval(Cld z) const {
    Value v{0, 0, 0, 0};
    for (int i = d; i >= 0; --i) {
      v.dp = v.dp * z + v.p;
      v.dq = v.dq * z + v.q;
      v.p = v.p * z + a[i];
      v.q = v.q * z + b[i];
    }
    return v;
  }

  // log sqrt(|P(z)|² + |Q(z)|²) minus shift log 2, coefficients reversed
  // when requested.
  long double log_psi(Cld z, bool reversed) const {
    Cld p = 0, q = 0;
    for (int i = d; i >= 0; --i) {
      const int k = reversed ? d - i : i;
      p = p * z + a[k];
      q = q * z + b[k];
    }
    return 0.5L * std::log(std::norm(p) + std::norm(q));
  }
};

// Local minima of ||F|| well below its typical size |f| (1 + |z|²)^(d/2),
// found from the roots of P and Q, with the width ||F|| / ||F'|| of the dip.
// Only chordally narrow dips are returned.
std::vector<SingularPoint> near_common_roots(const RationalMap& f, const ScaledLift& lift) {
  long double norm2 = 0;
  for (int i = 0; i <= lift.d; ++i) norm2 += std::norm(lift.a[i]) + std::norm(lift.b[i]);
  const long double typical = 0.5L * std::log(norm2);
  std::vector<SingularPoint> out;
  for (const IntegerPolynomial* g : {&f.P(), &f.Q()}) {
    if (g->degree() < 1) continue;
    for (const auto& root : complex_roots(*g).roots) {
      Cld c(root);
      // Gauss-Newton toward the minimizer of ||F||.
      for (int it = 0; it < 50; ++it) {
        const auto v = lift.eval(c);
        const long double g2 = std::norm(v.dp) + std::norm(v.dq);
        if (g2 == 0) break;
        const Cld step = (std::conj(v.dp) * v.p + std::conj(v.dq) * v.q) / g2;
        c -= step;
        if (std::abs(step) <= 1e-15L * (1 + std::abs(c))) break;
      }
      const long double drop =
          lift.log_psi(c, false) - typical - 0.5L * lift.d * std::log1p(std::norm(c));
      if (!(drop < kDipDrop)) continue;
      const auto v = lift.eval(c);
      const long double width = std::sqrt((std::norm(v.p) + std::norm(v.q)) /
                                          (std::norm(v.dp) + std::norm(v.dq)));
      if (!(width < kDipWidth * (1 + std::norm(c)))) continue;
      const bool seen = std::any_of(out.begin(), out.end(), [&](const SingularPoint& e) {
        return std::abs(*e.at - c) <= 0.1L * std::min(width, e.width);
      });
      if (!seen) out.emplace_back(c, width);
    }
  }
  return out;
}

}  // namespace

bool is_infinity(const SpherePoint& x) { return std::holds_alternative<PointAtInfinity>(x); }

bool same_point(const SpherePoint& x, const SpherePoint& y) {
  if (is_infinity(x) || is_infinity(y)) return is_infinity(x) && is_infinity(y);
  if (std::holds_alternative<Rational>(x) && std::holds_alternative<Rational>(y))
    return std::get<Rational>(x) == std::get<Rational>(y);
  auto as_complex = [](const SpherePoint& p) {
    return std::holds_alternative<Rational>(p) ? Cld(std::get<Rational>(p).get_d())
                                               : std::get<Cld>(p);
  };
  return as_complex(x) == as_complex(y);
}

std::string to_string(const SpherePoint& x) {
  if (is_infinity(x)) return "inf";
  if (std::holds_alternative<Rational>(x)) return std::get<Rational>(x).get_str();
  std::ostringstream os;
  os.precision(17);
  const Cld z = std::get<Cld>(x);
  os << static_cast<double>(z.real()) << (z.imag() < 0 ? "-" : "+")
     << static_cast<double>(std::fabs(z.imag())) << "i";
  return os.str();
}

double chordal_log(const SpherePoint& x, const SpherePoint& y, const Place& v) {
  if (is_exact(x) && is_exact(y)) {
    auto [a, b] = integer_lift(x);
    auto [c, e] = integer_lift(y);
    Integer det = a * e - b * c;
    if (det == 0) return kInfiniteEnergy;
    if (!v.is_archimedean())
      return static_cast<double>(valuation(det, v.p())) * std::log(v.p().get_d());
    Integer nx = a * a + b * b, ny = c * c + e * e;
    return -log_abs(det) + 0.5 * log_abs(nx) + 0.5 * log_abs(ny);
  }
  if (!v.is_archimedean())
    throw Error(ErrorKind::Domain, "complex points only exist at the Archimedean place");
  Homogeneous hx = homogeneous(x), hy = homogeneous(y);
  const long double det = std::abs(hx.x * hy.y - hx.y * hy.x);
  if (det == 0) return kInfiniteEnergy;
  const long double nx = std::sqrt(std::norm(hx.x) + std::norm(hx.y));
  const long double ny = std::sqrt(std::norm(hy.x) + std::norm(hy.y));
  return static_cast<double>(-std::log(det) + std::log(nx) + std::log(ny));
}

double jensen_integral(const Rational& x, const Rational& y, const Place& v) {
  if (x == 0 && y == 0) throw Error(ErrorKind::Domain, "jensen integral needs (x, y) != (0, 0)");
  if (v.is_archimedean()) {
    Rational s = x * x + y * y;
    return 0.5 * (log_abs(Integer(s.get_num())) - log_abs(Integer(s.get_den())));
  }
  if (x == 0) return log_abs(y, v);
  if (y == 0) return log_abs(x, v);
  return std::max(log_abs(x, v), log_abs(y, v));
}

QuadratureValue jensen_quadrature(const Rational& x, const Rational& y,
                                  const SphereQuadrature& quad) {
  if (x == 0 && y == 0) throw Error(ErrorKind::Domain, "jensen integral needs (x, y) != (0, 0)");
  const long double xl = x.get_d(), yl = y.get_d();
  std::vector<SingularPoint> singular;
  if (y != 0) {
    singular.emplace_back(Cld(xl / yl));
    singular.emplace_back(std::nullopt);
  }
  return sphere_integral([&](Cld z) { return 0.5L * std::log(std::norm(xl - z * yl)); }, quad, singular);
}

QuadratureValue arch_pullback_integral(const RationalMap& f, const SphereQuadrature& quad) {
  const ScaledLift lift(f);
  const std::vector<SingularPoint> dips = near_common_roots(f, lift);
  QuadratureValue in = disk_integral([&](Cld z) { return lift.log_psi(z, false); }, quad, dips);
  QuadratureValue out =
      outer_integral([&](Cld z) { return lift.log_psi(Cld(1) / z, true); }, quad, dips);
  const long double base = lift.shift * kLn2 + lift.d * 0.5L * kLn2;
  return {static_cast<double>(base + in.value + out.value), in.error + out.error,
          std::max(in.levels, out.levels)};
}

double arch_pullback_envelope(int d) {
  const double ln2 = std::numbers::ln2;
  const double lower = 3.0 * (d + 1) * 0.5 * ln2;
  const double upper = (2.0 * d + 1) / 4 * ln2 + 0.25 * std::log(d + 1.0);
  return std::max(lower, upper);
}

QuadratureValue pullback_energy_local(const RationalMap& f, const Place& v,
                                      const SphereQuadrature& quad) {
  const Integer R = reduction_datum(f, false).R;
  if (!v.is_archimedean())
    return {static_cast<double>(valuation(R, v.p())) * std::log(v.p().get_d()), 0, 0};
  const int d = f.degree();
  QuadratureValue I = arch_pullback_integral(f, quad);
  return {-log_abs(R) - 0.5 * d + 2.0 * d * I.value, 2.0 * d * I.error, I.levels};
}

QuadratureValue pullback_energy_total(const RationalMap& f, const SphereQuadrature& quad) {
  const int d = f.degree();
  QuadratureValue I = arch_pullback_integral(f, quad);
  return {2.0 * d * I.value - 0.5 * d, 2.0 * d * I.error, I.levels};
}

EnergyBreakdown pullback_energy_global(const RationalMap& f, const SphereQuadrature& quad,
                                       std::uint64_t factor_budget) {
  const int d = f.degree();
  ReductionDatum datum = reduction_datum(f, true, factor_budget);
  QuadratureValue I = arch_pullback_integral(f, quad);
  EnergyBreakdown out;
  out.per_place.push_back(
      {Place::archimedean(), -log_abs(datum.R) - 0.5 * d + 2.0 * d * I.value, 2.0 * d * I.error});
  for (const auto& [p, e] : datum.bad_primes->factors)
    out.per_place.push_back({Place::prime(p), static_cast<double>(e) * std::log(p.get_d()), 0});
  for (const auto& t : out.per_place) out.total += t.value;
  out.total_error = 2.0 * d * I.error;
  out.shortcut = 2.0 * d * I.value - 0.5 * d;
  if (std::fabs(out.total - out.shortcut) > 1e-7 + out.total_error) {
    std::ostringstream os;
    os.precision(17);
    os << "place-by-place energy " << out.total << " disagrees with the product-formula total "
       << out.shortcut;
    throw Error(ErrorKind::Numerical, os.str());
  }
  return out;
}

double WeightedPointMeasure::mass() const {
  double m = 0;
  for (const auto& a : atoms) m += a.weight;
  return m;
}

DiscreteEnergy discrete_energy(const WeightedPointMeasure& mu, const WeightedPointMeasure& nu) {
  if (!(mu.place == nu.place))
    throw Error(ErrorKind::Domain, "discrete energy needs both measures at the same place");
  DiscreteEnergy out;
  long double s = 0;
  for (const auto& x : mu.atoms)
    for (const auto& y : nu.atoms) {
      if (same_point(x.point, y.point)) {
        ++out.diagonal_pairs;
        continue;
      }
      s += static_cast<long double>(x.weight) * y.weight * chordal_log(x.point, y.point, mu.place);
    }
  out.value = static_cast<double>(s);
  return out;
}

double smoothed_energy(const WeightedPointMeasure& mu, const WeightedPointMeasure& nu, double eps) {
  if (!mu.place.is_archimedean() || !nu.place.is_archimedean())
    throw Error(ErrorKind::Domain, "smoothed energy is defined at the Archimedean place");
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::Domain, "smoothing radius must lie in (0, 1)");
  const long double c = -0.5L * std::log1p(-static_cast<long double>(eps) * eps);
  long double shared = 0;
  for (const auto& x : mu.atoms)
    for (const auto& y : nu.atoms)
      if (same_point(x.point, y.point)) shared += static_cast<long double>(x.weight) * y.weight;
  const long double self = -std::log(static_cast<long double>(eps)) - c;
  return static_cast<double>(discrete_energy(mu, nu).value + 2 * c * mu.mass() * nu.mass() +
                             self * shared);
}

double min_chordal_separation(const std::vector<const WeightedPointMeasure*>& measures) {
  std::vector<const SpherePoint*> pts;
  for (const auto* m : measures)
    for (const auto& a : m->atoms) pts.push_back(&a.point);
  double best = 1;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (same_point(*pts[i], *pts[j])) continue;
      best = std::min(best, std::exp(-chordal_log(*pts[i], *pts[j], Place::archimedean())));
    }
  return best;
}

std::vector<SpherePoint> pullback_points(const RationalMap& f, const SpherePoint& w, double tol) {
  const int d = f.degree();
  std::vector<SpherePoint> out;
  std::vector<std::complex<double>> roots;
  int finite_degree;
  if (is_infinity(w)) {
    finite_degree = f.deg_q();
    if (finite_degree > 0) roots = complex_roots(f.Q(), tol).roots;
  } else if (std::holds_alternative<Rational>(w)) {
    const Rational& r = std::get<Rational>(w);
    IntegerPolynomial g = f.P() * Integer(r.get_den()) - f.Q() * Integer(r.get_num());
    finite_degree = g.degree();
    if (finite_degree > 0) roots = complex_roots(g, tol).roots;
  } else {
    const Cld z = std::get<Cld>(w);
    long shift = 0;
    std::vector<Integer> all;
    for (int i = 0; i <= d; ++i) {
      all.push_back(f.a(i));
      all.push_back(f.b(i));
    }
    auto scaled = scaled_coefficients(IntegerPolynomial(all), &shift);
    scaled.resize(all.size(), 0);
    std::vector<Cld> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = scaled[2 * i] - z * scaled[2 * i + 1];
    while (!c.empty() && c.back() == Cld(0)) c.pop_back();
    finite_degree = static_cast<int>(c.size()) - 1;
    if (finite_degree > 0) roots = solve_polynomial(c, tol).roots;
  }
  for (const auto& r : roots) out.emplace_back(Cld(r.real(), r.imag()));
  for (int k = std::max(finite_degree, 0); k < d; ++k) out.emplace_back(PointAtInfinity{});
  return out;
}

SpherePoint apply(const RationalMap& f, const SpherePoint& x) {
  if (std::holds_alternative<Rational>(x)) {
    auto y = evaluate(f, std::get<Rational>(x));
    return y ? SpherePoint(*y) : SpherePoint(PointAtInfinity{});
  }
  if (is_infinity(x)) {
    auto y = evaluate(f, std::nullopt);
    return y ? SpherePoint(*y) : SpherePoint(PointAtInfinity{});
  }
  HomogeneousLift lift(f);
  Homogeneous h = homogeneous(x);
  Cld X = h.x, Y = h.y;
  lift.step(X, Y);
  if (Y == Cld(0)) return PointAtInfinity{};
  return X / Y;
}

WeightedPointMeasure pullback_measure(const RationalMap& f, const WeightedPointMeasure& mu) {
  WeightedPointMeasure out{mu.place, {}};
  for (const auto& a : mu.atoms)
    for (auto& p : pullback_points(f, a.point)) out.atoms.push_back({std::move(p), a.weight});
  return out;
}

WeightedPointMeasure pushforward_measure(const RationalMap& f, const WeightedPointMeasure& mu) {
  WeightedPointMeasure out{mu.place, {}};
  for (const auto& a : mu.atoms) out.atoms.push_back({apply(f, a.point), a.weight});
  return out;
}

}  // namespace adelic

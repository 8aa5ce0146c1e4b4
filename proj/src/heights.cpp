#include "adelic/heights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace adelic {

namespace {

constexpr double kLog2 = std::numbers::ln2;

long double log_sqrt1p_sq(long double r) {
  if (r <= 1) return 0.5L * std::log1p(r * r);
  return std::log(r) + 0.5L * std::log1p(1 / (r * r));
}

double root_error(const ComplexRootSet& r, int n) {
  return std::max(1e-14, r.residual_bound) * n;
}

HeightValue finalize(double value, double error, HeightMethod method) {
  HeightValue h{value, error, method, false, 0};
  if (h.value < -h.error_estimate) {
    h.value = -h.error_estimate;
    h.flagged = true;
  }
  return h;
}

long bit_size(const IntegerPolynomial& f) {
  long bits = 0;
  for (const auto& c : f.coefficients()) bits += static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2));
  return bits;
}

long bit_size(const Rational& x) {
  return static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2) +
                           mpz_sizeinbase(x.get_den_mpz_t(), 2));
}

struct Telescope {
  int d;
  double tol;
  std::vector<double> estimates;

  // True once two successive differences fall below tol (1 - 1/d).
  bool push(double e) {
    estimates.push_back(e);
    const std::size_t k = estimates.size();
    if (k < 3) return false;
    const double bound = tol * (1.0 - 1.0 / d);
    return std::fabs(estimates[k - 1] - estimates[k - 2]) < bound &&
           std::fabs(estimates[k - 2] - estimates[k - 3]) < bound;
  }
  HeightValue result(bool converged) const {
    double diff = estimates.size() >= 2
                      ? std::fabs(estimates.back() - estimates[estimates.size() - 2])
                      : 0.0;
    HeightValue h = finalize(estimates.back(), diff / (1.0 - 1.0 / d), HeightMethod::Telescoped);
    h.flagged = h.flagged || !converged;
    h.steps = static_cast<int>(estimates.size()) - 1;
    return h;
  }
};

}  // namespace

AlgebraicOrbit AlgebraicOrbit::infinity() {
  AlgebraicOrbit o;
  o.infinity_ = true;
  return o;
}

AlgebraicOrbit AlgebraicOrbit::rational(const Rational& x) {
  return AlgebraicOrbit(IntegerPolynomial(std::vector<Integer>{-x.get_num(), x.get_den()}));
}

AlgebraicOrbit::AlgebraicOrbit(const IntegerPolynomial& defining_poly)
    : poly_(defining_poly.primitive_part()), cache_(std::make_shared<Cache>()) {
  if (poly_.degree() < 1) throw Error(ErrorKind::Domain, "orbit polynomial needs degree >= 1");
}

AlgebraicOrbit::AlgebraicOrbit(const IntegerPolynomial& defining_poly, ComplexRootSet roots)
    : AlgebraicOrbit(defining_poly) {
  if (static_cast<int>(roots.roots.size()) != poly_.degree())
    throw Error(ErrorKind::Domain, "root count does not match the degree");
  std::call_once(cache_->once, [&] { cache_->roots = std::move(roots); });
}

std::optional<Rational> AlgebraicOrbit::as_rational() const {
  if (infinity_ || poly_.degree() != 1) return std::nullopt;
  return make_rational(-poly_.coeff(0), poly_.coeff(1));
}

const ComplexRootSet& AlgebraicOrbit::roots() const {
  if (infinity_) throw Error(ErrorKind::Domain, "the point at infinity has no finite roots");
  std::call_once(cache_->once, [&] { cache_->roots = complex_roots(poly_); });
  return cache_->roots;
}

const char* to_string(HeightMethod m) {
  switch (m) {
    case HeightMethod::Exact: return "exact";
    case HeightMethod::RootBased: return "root-based";
    case HeightMethod::Telescoped: return "telescoped";
  }
  return "unknown";
}

HeightValue naive_height(const Rational& x) {
  Integer m = std::max<Integer>(abs(Integer(x.get_num())), Integer(x.get_den()));
  return finalize(log_abs(m), 0, HeightMethod::Exact);
}

HeightValue naive_height(const AlgebraicOrbit& x) {
  if (x.is_infinity()) return finalize(0, 0, HeightMethod::Exact);
  if (auto r = x.as_rational()) return naive_height(*r);
  const auto& roots = x.roots();
  const int n = x.size();
  double v = mahler_log(x.defining_poly(), roots) / n;
  return finalize(v, root_error(roots, n) * (1 + std::fabs(v)), HeightMethod::RootBased);
}

HeightValue arakelov_height(const Rational& x) {
  if (x == 0) return finalize(0, 0, HeightMethod::Exact);
  Integer s = x.get_num() * x.get_num() + x.get_den() * x.get_den();
  return finalize(0.5 * log_abs(s), 0, HeightMethod::Exact);
}

HeightValue arakelov_height(const AlgebraicOrbit& x) {
  if (x.is_infinity()) return finalize(0, 0, HeightMethod::Exact);
  if (auto r = x.as_rational()) return arakelov_height(*r);
  const auto& roots = x.roots();
  const int n = x.size();
  long double s = log_abs(x.defining_poly().lead());
  for (const auto& a : roots.roots) s += log_sqrt1p_sq(std::abs(a));
  double v = static_cast<double>(s / n);
  return finalize(v, root_error(roots, n) * (1 + std::fabs(v)), HeightMethod::RootBased);
}

HeightValue arakelov_height_map(const RationalMap& f) {
  return finalize(log_norm(f), 0, HeightMethod::Exact);
}

HeightValue canonical_height(const RationalMap& g, const Rational& x, int m_max, double tol,
                             long bit_budget) {
  const int d = g.degree();
  Telescope t{d, tol, {}};
  std::optional<Rational> cur = x;
  std::vector<std::optional<Rational>> seen{cur};
  double scale = 1;
  t.push(naive_height(x).value);
  for (int m = 1; m <= m_max; ++m) {
    cur = evaluate(g, cur);
    scale /= d;
    if (std::find(seen.begin(), seen.end(), cur) != seen.end()) {
      HeightValue h = finalize(0, 0, HeightMethod::Exact);
      h.steps = m;
      return h;
    }
    seen.push_back(cur);
    if (!cur) {
      t.push(0);
      continue;
    }
    if (bit_size(*cur) > bit_budget)
      throw Error(ErrorKind::HeightIterationOverflow,
                  "rational orbit exceeds the bit budget at step " + std::to_string(m) +
                      "; lower telescope-max");
    if (t.push(scale * naive_height(*cur).value)) return t.result(true);
  }
  return t.result(false);
}

HeightValue canonical_height(const RationalMap& g, const AlgebraicOrbit& x, int m_max,
                             double tol, long bit_budget) {
  const int d = g.degree();
  if (x.is_infinity() && g.is_polynomial()) return finalize(0, 0, HeightMethod::Exact);
  if (auto r = x.as_rational()) return canonical_height(g, *r, m_max, tol, bit_budget);

  using C = std::complex<long double>;
  const bool good = reduction_datum(g, false).explicit_good_reduction();
  HomogeneousLift lift(g);
  const long double ls = static_cast<long double>(lift.shift()) * std::log(2.0L);

  // Points as normalized lifts with accumulated log scale.
  std::vector<C> xs, ys;
  std::vector<long double> logs;
  if (x.is_infinity()) {
    xs.push_back(1);
    ys.push_back(0);
    logs.push_back(0);
  } else {
    for (const auto& a : x.roots().roots) {
      C z(a.real(), a.imag());
      long double m = std::max<long double>(1, std::abs(z));
      xs.push_back(z / m);
      ys.push_back(C(1) / m);
      logs.push_back(std::log(m));
    }
  }
  const int n = static_cast<int>(xs.size());
  const long double lead_log = x.is_infinity() ? 0 : log_abs(x.defining_poly().lead());

  Telescope t{d, tol, {}};
  long double sum0 = 0;
  for (auto l : logs) sum0 += l;
  t.push(static_cast<double>((lead_log + sum0) / n));

  IntegerPolynomial fm = x.is_infinity() ? IntegerPolynomial{} : x.defining_poly();
  long double scale = 1;
  for (int m = 1; m <= m_max; ++m) {
    scale /= d;
    for (int i = 0; i < n; ++i) {
      lift.step(xs[i], ys[i]);
      long double mm = std::max(std::abs(xs[i]), std::abs(ys[i]));
      logs[i] = d * logs[i] + ls + std::log(mm);
      xs[i] /= mm;
      ys[i] /= mm;
    }
    long double e;
    if (good) {
      // |G(x)|_p = |x|_p^d at every prime, so after scaling by d^-m the
      // finite part stays log lead(F).
      long double s = 0;
      for (auto l : logs) s += l;
      e = (lead_log + scale * s) / n;
    } else {
      if (x.is_infinity())
        throw Error(ErrorKind::Domain, "infinity under a rational map: use a rational point");
      fm = image_polynomial(fm, g);
      if (fm.degree() != n)
        throw Error(ErrorKind::OrbitAtInfinity,
                    "part of the orbit reaches infinity at step " + std::to_string(m));
      if (bit_size(fm) > bit_budget)
        throw Error(ErrorKind::HeightIterationOverflow,
                    "image polynomial exceeds the bit budget at step " + std::to_string(m) +
                        "; lower telescope-max or use a smaller orbit");
      long double s = log_abs(fm.lead());
      for (int i = 0; i < n; ++i) {
        long double ay = std::abs(ys[i]);
        if (ay == 0) continue;
        s += std::max<long double>(0, -std::log(ay));
      }
      e = scale * s / n;
    }
    if (t.push(static_cast<double>(e))) return t.result(true);
  }
  return t.result(false);
}

double standard_potential(const Rational& x) {
  Integer num = x.get_num(), den = x.get_den();
  Integer m = std::max<Integer>(abs(num), den);
  Integer s = num * num + den * den;
  return -log_abs(m) + 0.5 * log_abs(s) + 0.5 * kLog2;
}

double standard_potential(const AlgebraicOrbit& x) {
  if (x.is_infinity()) return 0.5 * kLog2;
  if (auto r = x.as_rational()) return standard_potential(*r);
  long double s = 0;
  for (const auto& a : x.roots().roots) {
    long double r = std::abs(std::complex<long double>(a.real(), a.imag()));
    s += -std::max<long double>(0, std::log(r)) + log_sqrt1p_sq(r);
  }
  return static_cast<double>(s / x.size()) + 0.5 * kLog2;
}

double theta_constant() {
  static const double theta = [] {
    auto roots = complex_roots(IntegerPolynomial{-1, -1, -3, 1}).roots;
    double best = 0, imag = 1e300;
    for (const auto& r : roots)
      if (std::fabs(r.imag()) < imag) {
        imag = std::fabs(r.imag());
        best = r.real();
      }
    return best;
  }();
  return theta;
}

HeightInequalityReport check_height_inequalities(const AlgebraicOrbit& x) {
  HeightInequalityReport r;
  r.h = naive_height(x).value;
  r.h_ar = arakelov_height(x).value;
  const double slack_tol = 1e-12 * (1 + std::fabs(r.h_ar));
  r.lower_slack = r.h - (r.h_ar - 0.5 * kLog2);
  r.upper_slack = r.h_ar - r.h;
  r.floor_applies = !x.is_infinity() && x.defining_poly().coeff(0) != 0;
  r.holds = r.lower_slack >= -slack_tol && r.upper_slack >= -slack_tol;
  if (r.floor_applies) {
    const double excess = r.h_ar - 0.5 * kLog2;
    r.floor_slack = excess;
    const double A = std::log(theta_constant());
    r.sqrt_slack = 2 * r.h_ar - kLog2 + std::sqrt(A * std::max(0.0, excess)) - r.h;
    r.holds = r.holds && r.floor_slack >= -slack_tol && r.sqrt_slack >= -slack_tol;
  }
  return r;
}

HeightInequalityReport check_height_inequalities(const Rational& x) {
  return check_height_inequalities(AlgebraicOrbit::rational(x));
}

}  // namespace adelic

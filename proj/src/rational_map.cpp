#include "adelic/rational_map.hpp"

#include <cmath>

namespace adelic {

RationalMap normalize(const IntegerPolynomial& num, const IntegerPolynomial& den) {
  if (den.is_zero()) throw Error(ErrorKind::DegenerateMap, "denominator is zero");
  if (num.is_zero()) throw Error(ErrorKind::DegenerateMap, "map is constant 0");
  IntegerPolynomial g = gcd(num, den);
  IntegerPolynomial p = exact_quotient(num, g), q = exact_quotient(den, g);
  Integer c = p.content();
  Integer cq = q.content();
  mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cq.get_mpz_t());
  if (sgn(q.lead()) < 0) c = -c;
  IntegerPolynomial cp = IntegerPolynomial::constant(c);
  p = exact_quotient(p, cp);
  q = exact_quotient(q, cp);
  if (std::max(p.degree(), q.degree()) < 1)
    throw Error(ErrorKind::DegenerateMap, "map is constant");
  RationalMap f;
  f.p_ = std::move(p);
  f.q_ = std::move(q);
  return f;
}

namespace {

IntegerPolynomial clear(const std::vector<Rational>& c, const Integer& l) {
  std::vector<Integer> v;
  v.reserve(c.size());
  for (const auto& x : c) {
    Integer t = l / x.get_den();
    v.emplace_back(t * x.get_num());
  }
  return IntegerPolynomial(std::move(v));
}

}  // namespace

RationalMap normalize(const std::vector<Rational>& num, const std::vector<Rational>& den) {
  Integer l = 1;
  for (const auto* side : {&num, &den})
    for (const auto& x : *side) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return normalize(clear(num, l), clear(den, l));
}

RationalMap normalize(const RationalPolynomial& num, const RationalPolynomial& den) {
  return normalize(num.coefficients(), den.coefficients());
}

MapIterate iterate_with_lift(const RationalMap& f, int n, long degree_cap) {
  if (n < 1) throw Error(ErrorKind::Domain, "iterate needs n >= 1");
  const int d = f.degree();
  long double deg = std::pow(static_cast<long double>(d), n);
  if (deg > static_cast<long double>(degree_cap))
    throw Error(ErrorKind::IterationCap,
                "degree " + std::to_string(d) + "^" + std::to_string(n) +
                    " exceeds the iteration cap " + std::to_string(degree_cap));
  MapIterate out;
  out.base = f;
  out.n = n;
  IntegerPolynomial pk = f.P(), qk = f.Q();
  double log_c = 0;
  long formal = d;
  for (int k = 1; k < n; ++k) {
    std::vector<IntegerPolynomial> pp(d + 1), qp(d + 1);
    pp[0] = qp[0] = IntegerPolynomial::constant(1);
    for (int i = 1; i <= d; ++i) {
      pp[i] = pp[i - 1] * pk;
      qp[i] = qp[i - 1] * qk;
    }
    IntegerPolynomial np, nq;
    for (int i = 0; i <= d; ++i) {
      if (f.a(i) == 0 && f.b(i) == 0) continue;
      IntegerPolynomial term = pp[i] * qp[d - i];
      if (f.a(i) != 0) np += term * f.a(i);
      if (f.b(i) != 0) nq += term * f.b(i);
    }
    formal *= d;
    Integer c = np.content();
    Integer cq = nq.content();
    mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cq.get_mpz_t());
    log_c = d * log_c + log_abs(c);
    if (c != 1) {
      np = exact_quotient(np, IntegerPolynomial::constant(c));
      nq = exact_quotient(nq, IntegerPolynomial::constant(c));
    }
    pk = std::move(np);
    qk = std::move(nq);
  }
  out.map = normalize(pk, qk);
  out.log_content = log_c;
  if (out.map.degree() != formal)
    throw Error(ErrorKind::Numerical, "iterate lost degree; base map not normalized");
  return out;
}

RationalMap iterate(const RationalMap& f, int n, long degree_cap) {
  return iterate_with_lift(f, n, degree_cap).map;
}

RationalMap power_map(int d) {
  if (d == 0) throw Error(ErrorKind::Domain, "power map needs d != 0");
  int k = std::abs(d);
  IntegerPolynomial zk = IntegerPolynomial::monomial(1, k);
  IntegerPolynomial one = IntegerPolynomial::constant(1);
  return d > 0 ? normalize(zk, one) : normalize(one, zk);
}

RationalMap chebyshev(int d) {
  if (d < 2) throw Error(ErrorKind::Domain, "chebyshev needs d >= 2");
  IntegerPolynomial prev = IntegerPolynomial::constant(2), cur{0, 1};
  IntegerPolynomial z{0, 1};
  for (int k = 1; k < d; ++k) {
    IntegerPolynomial next = z * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return normalize(cur, IntegerPolynomial::constant(1));
}

RationalMap lattes(const Integer& a, const Integer& b) {
  if (a < 1 || b < 1) throw Error(ErrorKind::Domain, "lattes needs a, b >= 1");
  IntegerPolynomial x{0, 1};
  IntegerPolynomial s = x * x + IntegerPolynomial::constant(a * b);
  IntegerPolynomial num = s * s;
  IntegerPolynomial den = x * (x - IntegerPolynomial::constant(a)) *
                          (x + IntegerPolynomial::constant(b)) * Integer(4);
  return normalize(num, den);
}

RationalMap conjugate_power_map(int d, const Rational& a, const Rational& b) {
  if (std::abs(d) < 2) throw Error(ErrorKind::Domain, "conjugate_power_map needs |d| >= 2");
  if (a == 0) throw Error(ErrorKind::Domain, "conjugate_power_map needs a != 0");
  RationalPolynomial phi(std::vector<Rational>{b, a});
  RationalPolynomial bb = RationalPolynomial::constant(b), aa = RationalPolynomial::constant(a);
  RationalPolynomial pk = pow(phi, static_cast<unsigned>(std::abs(d)));
  if (d > 0) return normalize(pk - bb, aa);
  return normalize(RationalPolynomial::constant(1) - bb * pk, aa * pk);
}

ReductionDatum reduction_datum(const RationalMap& f, bool with_primes, std::uint64_t budget) {
  const int d = f.degree(), p = f.deg_p(), q = f.deg_q();
  Integer ap, bq;
  mpz_pow_ui(ap.get_mpz_t(), f.lead_p().get_mpz_t(), static_cast<unsigned long>(d - q));
  mpz_pow_ui(bq.get_mpz_t(), f.lead_q().get_mpz_t(), static_cast<unsigned long>(d - p));
  ReductionDatum out;
  out.R = ap * bq * resultant(f.P(), f.Q());
  if (out.R == 0) throw Error(ErrorKind::DegenerateMap, "vanishing resultant");
  if (with_primes) out.bad_primes = factorize(out.R, budget);
  return out;
}

std::optional<Rational> evaluate(const RationalMap& f, const std::optional<Rational>& x) {
  if (!x) {
    if (f.deg_p() > f.deg_q()) return std::nullopt;
    if (f.deg_p() < f.deg_q()) return Rational(0);
    return make_rational(f.lead_p(), f.lead_q());
  }
  Rational den = f.Q()(*x);
  if (den == 0) return std::nullopt;
  Rational v = f.P()(*x) / den;
  v.canonicalize();
  return v;
}

std::string render(const RationalMap& f, char var) {
  if (f.Q() == IntegerPolynomial::constant(1)) return f.P().to_string(var);
  return "(" + f.P().to_string(var) + ")/(" + f.Q().to_string(var) + ")";
}

double log_norm(const RationalMap& f) {
  Integer s = 0;
  for (const auto& c : f.P().coefficients()) s += c * c;
  for (const auto& c : f.Q().coefficients()) s += c * c;
  return 0.5 * log_abs(s);
}

HomogeneousLift::HomogeneousLift(const RationalMap& f) : d_(f.degree()) {
  std::vector<Integer> all;
  for (int i = 0; i <= d_; ++i) {
    all.push_back(f.a(i));
    all.push_back(f.b(i));
  }
  auto scaled = scaled_coefficients(IntegerPolynomial(all), &shift_);
  scaled.resize(all.size(), 0);
  a_.resize(d_ + 1);
  b_.resize(d_ + 1);
  for (int i = 0; i <= d_; ++i) {
    a_[i] = scaled[2 * i];
    b_[i] = scaled[2 * i + 1];
  }
}

void HomogeneousLift::step(C& x, C& y) const {
  C px, qx;
  if (std::abs(x) <= std::abs(y)) {
    C t = x / y, p = a_[d_], q = b_[d_];
    for (int i = d_ - 1; i >= 0; --i) {
      p = p * t + a_[i];
      q = q * t + b_[i];
    }
    C yd = std::pow(y, d_);
    px = p * yd;
    qx = q * yd;
  } else {
    C s = y / x, p = a_[0], q = b_[0];
    for (int i = 1; i <= d_; ++i) {
      p = p * s + a_[i];
      q = q * s + b_[i];
    }
    C xd = std::pow(x, d_);
    px = p * xd;
    qx = q * xd;
  }
  x = px;
  y = qx;
}

void HomogeneousLift::step(C& x, C& y, C& dx, C& dy) const {
  const long double dd = d_;
  C p, q, pd, qd;  // values and derivatives of the dehomogenized forms
  C fx, fy, gx, gy, fv, gv;
  if (std::abs(x) <= std::abs(y)) {
    C t = x / y;
    p = a_[d_];
    q = b_[d_];
    pd = qd = 0;
    for (int i = d_ - 1; i >= 0; --i) {
      pd = pd * t + p;
      qd = qd * t + q;
      p = p * t + a_[i];
      q = q * t + b_[i];
    }
    C yd1 = std::pow(y, d_ - 1);
    fv = p * yd1 * y;
    gv = q * yd1 * y;
    fx = pd * yd1;
    gx = qd * yd1;
    fy = (dd * p - t * pd) * yd1;
    gy = (dd * q - t * qd) * yd1;
  } else {
    C s = y / x;
    p = a_[0];
    q = b_[0];
    pd = qd = 0;
    for (int i = 1; i <= d_; ++i) {
      pd = pd * s + p;
      qd = qd * s + q;
      p = p * s + a_[i];
      q = q * s + b_[i];
    }
    C xd1 = std::pow(x, d_ - 1);
    fv = p * xd1 * x;
    gv = q * xd1 * x;
    fy = pd * xd1;
    gy = qd * xd1;
    fx = (dd * p - s * pd) * xd1;
    gx = (dd * q - s * qd) * xd1;
  }
  C ndx = fx * dx + fy * dy;
  C ndy = gx * dx + gy * dy;
  x = fv;
  y = gv;
  dx = ndx;
  dy = ndy;
}

long double HomogeneousLift::log_norm_iterate(C x, C y, int n) const {
  long double m = std::max(std::abs(x), std::abs(y));
  long double L = std::log(m);
  x /= m;
  y /= m;
  const long double ls = static_cast<long double>(shift_) * std::log(2.0L);
  for (int k = 0; k < n; ++k) {
    step(x, y);
    m = std::max(std::abs(x), std::abs(y));
    L = d_ * L + ls + std::log(m);
    x /= m;
    y /= m;
  }
  return L;
}

}  // namespace adelic

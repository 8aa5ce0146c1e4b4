#include "adelic/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adelic/rational_map.hpp"

namespace adelic {

using cld = std::complex<long double>;

IntegerPolynomial::IntegerPolynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) {
  trim();
}

IntegerPolynomial::IntegerPolynomial(std::initializer_list<long> coeffs) {
  for (long c : coeffs) c_.emplace_back(c);
  trim();
}

IntegerPolynomial IntegerPolynomial::constant(const Integer& c) {
  return IntegerPolynomial(std::vector<Integer>{c});
}

IntegerPolynomial IntegerPolynomial::monomial(const Integer& c, int k) {
  std::vector<Integer> v(k + 1, 0);
  v[k] = c;
  return IntegerPolynomial(std::move(v));
}

void IntegerPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Integer IntegerPolynomial::coeff(int i) const {
  return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Integer(0);
}

const Integer& IntegerPolynomial::lead() const {
  if (c_.empty()) throw Error(ErrorKind::Domain, "leading coefficient of zero polynomial");
  return c_.back();
}

Integer IntegerPolynomial::content() const {
  Integer g = 0;
  for (const auto& a : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntegerPolynomial IntegerPolynomial::primitive_part() const {
  if (c_.empty()) return *this;
  Integer g = content();
  if (sgn(lead()) < 0) g = -g;
  std::vector<Integer> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i)
    mpz_divexact(v[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
  return IntegerPolynomial(std::move(v));
}

bool IntegerPolynomial::is_primitive() const { return !c_.empty() && content() == 1; }

IntegerPolynomial IntegerPolynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Integer> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return IntegerPolynomial(std::move(v));
}

IntegerPolynomial IntegerPolynomial::reversed(int n) const {
  if (n < degree()) throw Error(ErrorKind::Domain, "reversal degree below polynomial degree");
  std::vector<Integer> v(n + 1, 0);
  for (int i = 0; i <= degree(); ++i) v[n - i] = c_[i];
  return IntegerPolynomial(std::move(v));
}

Rational IntegerPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i];
  return acc;
}

cld IntegerPolynomial::eval(cld z) const {
  if (c_.empty()) return 0;
  long shift = 0;
  auto a = scaled_coefficients(*this, &shift);
  cld acc = 0;
  for (int i = degree(); i >= 0; --i) acc = acc * z + a[i];
  return acc * std::ldexp(1.0L, static_cast<int>(shift));
}

IntegerPolynomial IntegerPolynomial::operator-() const {
  IntegerPolynomial r = *this;
  for (auto& a : r.c_) a = -a;
  return r;
}

IntegerPolynomial& IntegerPolynomial::operator+=(const IntegerPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

IntegerPolynomial& IntegerPolynomial::operator-=(const IntegerPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

IntegerPolynomial& IntegerPolynomial::operator*=(const Integer& c) {
  for (auto& a : c_) a *= c;
  trim();
  return *this;
}

IntegerPolynomial operator*(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Integer> v(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      mpz_addmul(v[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
  }
  return IntegerPolynomial(std::move(v));
}

std::string IntegerPolynomial::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Integer& a = c_[i];
    if (a == 0) continue;
    Integer mag = abs(a);
    if (first) {
      if (sgn(a) < 0) os << "-";
    } else {
      os << (sgn(a) < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

IntegerPolynomial pow(const IntegerPolynomial& f, unsigned k) {
  IntegerPolynomial result = IntegerPolynomial::constant(1), base = f;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

IntegerPolynomial compose(const IntegerPolynomial& f, const IntegerPolynomial& g) {
  IntegerPolynomial acc;
  for (int i = f.degree(); i >= 0; --i)
    acc = acc * g + IntegerPolynomial::constant(f.coeff(i));
  return acc;
}

IntegerPolynomial pseudo_remainder(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::Domain, "pseudo-division by zero");
  IntegerPolynomial r = a;
  const int db = b.degree();
  int e = a.degree() - db + 1;
  if (e <= 0) return r;
  const Integer lb = b.lead();
  while (!r.is_zero() && r.degree() >= db) {
    IntegerPolynomial t = IntegerPolynomial::monomial(r.lead(), r.degree() - db) * b;
    r *= lb;
    r -= t;
    --e;
  }
  Integer scale;
  mpz_pow_ui(scale.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
  return r * scale;
}

IntegerPolynomial exact_quotient(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::Domain, "division by zero polynomial");
  IntegerPolynomial r = a;
  const int db = b.degree();
  if (a.degree() < db) {
    if (a.is_zero()) return {};
    throw Error(ErrorKind::Domain, "polynomial division is not exact");
  }
  std::vector<Integer> q(a.degree() - db + 1, 0);
  while (!r.is_zero() && r.degree() >= db) {
    Integer c;
    if (!mpz_divisible_p(r.lead().get_mpz_t(), b.lead().get_mpz_t()))
      throw Error(ErrorKind::Domain, "polynomial division is not exact");
    mpz_divexact(c.get_mpz_t(), r.lead().get_mpz_t(), b.lead().get_mpz_t());
    int k = r.degree() - db;
    q[k] = c;
    r -= IntegerPolynomial::monomial(c, k) * b;
  }
  if (!r.is_zero()) throw Error(ErrorKind::Domain, "polynomial division is not exact");
  return IntegerPolynomial(std::move(q));
}

namespace {

using u64 = unsigned long;

std::vector<u64> reduce_mod(const IntegerPolynomial& f, u64 p) {
  std::vector<u64> v(f.coefficients().size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = mpz_fdiv_ui(f.coefficients()[i].get_mpz_t(), p);
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

u64 inverse_mod(u64 a, u64 p) {
  long long t = 0, nt = 1, r = static_cast<long long>(p), nr = static_cast<long long>(a % p);
  while (nr) {
    long long q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return static_cast<u64>(t < 0 ? t + static_cast<long long>(p) : t);
}

// Degree of gcd over F_p.
int gcd_degree_mod(std::vector<u64> a, std::vector<u64> b, u64 p) {
  while (!b.empty()) {
    u64 inv = inverse_mod(b.back(), p);
    while (a.size() >= b.size()) {
      u64 c = static_cast<u64>((static_cast<unsigned __int128>(a.back()) * inv) % p);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        u64 t = static_cast<u64>((static_cast<unsigned __int128>(c) * b[i]) % p);
        a[off + i] = (a[off + i] + p - t) % p;
      }
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}


// Monic gcd over F_p, inputs reduced.
std::vector<u64> gcd_mod(std::vector<u64> a, std::vector<u64> b, u64 p) {
  while (!b.empty()) {
    u64 inv = inverse_mod(b.back(), p);
    while (a.size() >= b.size()) {
      u64 c = static_cast<u64>((static_cast<unsigned __int128>(a.back()) * inv) % p);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        u64 t = static_cast<u64>((static_cast<unsigned __int128>(c) * b[i]) % p);
        a[off + i] = (a[off + i] + p - t) % p;
      }
      while (!a.empty() && a.back() == 0) a.pop_back();
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  u64 inv = inverse_mod(a.back(), p);
  for (u64& x : a) x = static_cast<u64>((static_cast<unsigned __int128>(x) * inv) % p);
  return a;
}

bool divides(const IntegerPolynomial& h, const IntegerPolynomial& f) {
  return pseudo_remainder(f, h).is_zero();
}

// Primitive inputs of positive degree. Images modulo word-size primes are
// lifted by Chinese remaindering until the candidate divides both inputs.
IntegerPolynomial modular_gcd(const IntegerPolynomial& x, const IntegerPolynomial& y) {
  Integer lc;
  mpz_gcd(lc.get_mpz_t(), x.lead().get_mpz_t(), y.lead().get_mpz_t());
  Integer prime = Integer(1) << 61, modulus = 0;
  std::vector<Integer> acc;
  IntegerPolynomial last;
  int best = std::min(x.degree(), y.degree()) + 1;
  for (;;) {
    mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    const u64 p = prime.get_ui();
    if (mpz_fdiv_ui(x.lead().get_mpz_t(), p) == 0 || mpz_fdiv_ui(y.lead().get_mpz_t(), p) == 0) continue;
    std::vector<u64> g = gcd_mod(reduce_mod(x, p), reduce_mod(y, p), p);
    const int deg = static_cast<int>(g.size()) - 1;
    if (deg == 0) return IntegerPolynomial::constant(1);
    if (deg > best) continue;
    const u64 s = mpz_fdiv_ui(lc.get_mpz_t(), p);
    for (u64& c : g) c = static_cast<u64>((static_cast<unsigned __int128>(c) * s) % p);
    if (deg < best) {
      best = deg;
      acc.assign(g.begin(), g.end());
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] = Integer(static_cast<unsigned long>(g[i]));
      modulus = prime;
      last = IntegerPolynomial();
      continue;
    }
    const u64 inv = inverse_mod(mpz_fdiv_ui(modulus.get_mpz_t(), p), p);
    for (std::size_t i = 0; i < g.size(); ++i) {
      u64 r = mpz_fdiv_ui(acc[i].get_mpz_t(), p);
      u64 t = static_cast<u64>((static_cast<unsigned __int128>((g[i] + p - r) % p) * inv) % p);
      acc[i] += modulus * Integer(static_cast<unsigned long>(t));
    }
    modulus *= prime;
    const Integer half = modulus / 2;
    std::vector<Integer> sym(acc);
    for (Integer& c : sym)
      if (c > half) c -= modulus;
    IntegerPolynomial cand = IntegerPolynomial(std::move(sym)).primitive_part();
    if (cand.lead() < 0) cand = -cand;
    if (cand == last && divides(cand, x) && divides(cand, y)) return cand;
    last = std::move(cand);
  }
}

}  // namespace

IntegerPolynomial gcd(const IntegerPolynomial& a, const IntegerPolynomial& b) {
  if (a.is_zero()) return b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  if (a.degree() > 0 && b.degree() > 0)
    for (unsigned long p : {1000003UL, 1000033UL, 1000037UL})
      if (coprime_mod(a, b, p)) return IntegerPolynomial::constant(1);
  IntegerPolynomial x = a.primitive_part(), y = b.primitive_part();
  if (x.degree() > 0 && y.degree() > 0) return modular_gcd(x, y);
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntegerPolynomial r = pseudo_remainder(x, y);
    x = std::move(y);
    y = r.primitive_part();
  }
  return x.primitive_part();
}


bool coprime_mod(const IntegerPolynomial& a, const IntegerPolynomial& b, unsigned long p) {
  auto ap = reduce_mod(a, p);
  if (static_cast<int>(ap.size()) - 1 != a.degree()) return false;
  auto bp = reduce_mod(b, p);
  if (bp.empty()) return false;
  return gcd_degree_mod(ap, bp, p) == 0;
}

bool squarefree_mod(const IntegerPolynomial& f, unsigned long p) {
  auto fp = reduce_mod(f, p);
  if (static_cast<int>(fp.size()) - 1 != f.degree()) return false;
  auto dp = reduce_mod(f.derivative(), p);
  if (dp.empty()) return false;
  return gcd_degree_mod(fp, dp, p) == 0;
}

IntegerPolynomial squarefree_part(const IntegerPolynomial& f) {
  if (f.degree() <= 0) return f.primitive_part();
  IntegerPolynomial pp = f.primitive_part();
  for (unsigned long p : {1000003UL, 1000033UL, 1000037UL})
    if (squarefree_mod(pp, p)) return pp;
  IntegerPolynomial g = gcd(pp, pp.derivative());
  if (g.degree() == 0) return pp;
  return exact_quotient(pp, g).primitive_part();
}

Integer resultant_bareiss(const IntegerPolynomial& f, const IntegerPolynomial& g) {
  const int m = f.degree(), n = g.degree();
  const int size = m + n;
  if (size == 0) return 1;
  std::vector<std::vector<Integer>> a(size, std::vector<Integer>(size, 0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) a[i][i + k] = f.coeff(m - k);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) a[n + i][i + k] = g.coeff(n - k);

  int sign = 1;
  Integer prev = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < size; ++i)
        if (a[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        Integer t = a[i][j] * a[k][k];
        mpz_submul(t.get_mpz_t(), a[i][k].get_mpz_t(), a[k][j].get_mpz_t());
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[size - 1][size - 1];
}

Integer resultant_subresultant(const IntegerPolynomial& f, const IntegerPolynomial& g) {
  IntegerPolynomial a = f, b = g;
  Integer ca = a.content(), cb = b.content();
  if (sgn(a.lead()) < 0) ca = -ca;
  if (sgn(b.lead()) < 0) cb = -cb;
  auto ipow = [](const Integer& x, long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
  };
  Integer t = ipow(ca, b.degree()) * ipow(cb, a.degree());
  a = exact_quotient(a, IntegerPolynomial::constant(ca));
  b = exact_quotient(b, IntegerPolynomial::constant(cb));
  int s = 1;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() & 1) && (b.degree() & 1)) s = -1;
  }
  Integer gg = 1, h = 1;
  while (b.degree() > 0) {
    const int delta = a.degree() - b.degree();
    if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
    IntegerPolynomial r = pseudo_remainder(a, b);
    a = std::move(b);
    Integer div = gg * ipow(h, delta);
    std::vector<Integer> q = r.coefficients();
    for (auto& c : q) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), div.get_mpz_t());
    b = IntegerPolynomial(std::move(q));
    gg = a.lead();
    // h <- h^(1-delta) g^delta
    Integer num = ipow(gg, delta);
    if (delta >= 1) {
      Integer den = ipow(h, delta - 1);
      mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    } else {
      h = h * num;
    }
  }
  if (b.is_zero()) return 0;
  const int da = a.degree();
  Integer num = ipow(b.lead(), da);
  Integer hh;
  if (da >= 1) {
    Integer den = ipow(h, da - 1);
    mpz_divexact(hh.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  } else {
    hh = h * num;
  }
  return s * t * hh;
}

Integer resultant(const IntegerPolynomial& f, const IntegerPolynomial& g) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorKind::Domain, "resultant of zero polynomial");
  if (f.degree() == 0 && g.degree() == 0) return 1;
  auto ipow = [](const Integer& x, int e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
  };
  if (g.degree() == 0) return ipow(g.lead(), f.degree());
  if (f.degree() == 0) return ipow(f.lead(), g.degree());
  if (std::max(f.degree(), g.degree()) <= 64) return resultant_bareiss(f, g);
  return resultant_subresultant(f, g);
}

std::vector<cld> scaled_coefficients(const IntegerPolynomial& f, long* shift) {
  long top = 0;
  for (const auto& a : f.coefficients())
    if (a != 0) top = std::max(top, static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)));
  std::vector<cld> out;
  out.reserve(f.coefficients().size());
  for (const auto& a : f.coefficients()) {
    if (a == 0) {
      out.emplace_back(0);
      continue;
    }
    long e = 0;
    double m = mpz_get_d_2exp(&e, a.get_mpz_t());
    out.emplace_back(std::ldexp(static_cast<long double>(m), static_cast<int>(e - top)));
  }
  if (shift) *shift = top;
  return out;
}

ComplexRootSet complex_roots(const IntegerPolynomial& f, double tol) {
  if (f.degree() < 1) throw Error(ErrorKind::Domain, "complex_roots needs degree >= 1");
  return solve_polynomial(scaled_coefficients(f), tol);
}

double mahler_log(const IntegerPolynomial& f, const ComplexRootSet& roots) {
  double s = log_abs(f.lead());
  for (const auto& r : roots.roots) s += std::log(std::max(1.0, std::abs(r)));
  return s;
}

double mahler_log(const IntegerPolynomial& f, double tol) {
  if (f.is_zero()) throw Error(ErrorKind::Domain, "Mahler measure of zero");
  if (f.degree() == 0) return log_abs(f.lead());
  return mahler_log(f, complex_roots(f, tol));
}

IntegerPolynomial image_polynomial(const IntegerPolynomial& f, const RationalMap& map) {
  if (f.degree() < 1) throw Error(ErrorKind::Domain, "image_polynomial needs degree >= 1");
  const int n = f.degree();
  const int d = map.degree();
  std::vector<Rational> xs, ys;
  for (long k = 0; static_cast<int>(xs.size()) <= n; ++k) {
    long w = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
    IntegerPolynomial h = map.P() - map.Q() * Integer(w);
    if (h.degree() < d) continue;
    xs.emplace_back(w);
    ys.emplace_back(resultant_subresultant(f, h));
  }
  // Newton divided differences, then expansion to the monomial basis.
  std::vector<Rational> dd = ys;
  for (int j = 1; j <= n; ++j)
    for (int i = n; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
    }
  std::vector<Rational> poly(1, dd[n]);
  for (int i = n - 1; i >= 0; --i) {
    std::vector<Rational> next(poly.size() + 1, 0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= poly[k] * xs[i];
    }
    next[0] += dd[i];
    poly = std::move(next);
  }
  std::vector<Integer> coeffs;
  for (auto& c : poly) {
    c.canonicalize();
    if (c.get_den() != 1) throw Error(ErrorKind::Numerical, "non-integral interpolation");
    coeffs.emplace_back(c.get_num());
  }
  IntegerPolynomial out = IntegerPolynomial(std::move(coeffs)).primitive_part();
  if (out.degree() < 1) throw Error(ErrorKind::OrbitAtInfinity, "every point of the orbit maps to infinity");
  return out;
}

RationalPolynomial::RationalPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

RationalPolynomial RationalPolynomial::constant(const Rational& c) {
  return RationalPolynomial(std::vector<Rational>{c});
}

RationalPolynomial RationalPolynomial::variable() {
  return RationalPolynomial(std::vector<Rational>{0, 1});
}

void RationalPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

RationalPolynomial RationalPolynomial::operator-() const {
  RationalPolynomial r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  return RationalPolynomial(std::move(v));
}

RationalPolynomial pow(const RationalPolynomial& f, unsigned k) {
  RationalPolynomial result = RationalPolynomial::constant(1), base = f;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

}  // namespace adelic

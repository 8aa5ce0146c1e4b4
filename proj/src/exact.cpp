#include "adelic/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace adelic {

std::string_view error_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::FactorizationTimeout: return "factorization-timeout";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::OrbitAtInfinity: return "orbit-at-infinity";
    case ErrorKind::DegenerateMap: return "degenerate-map";
    case ErrorKind::IterationCap: return "iteration-cap";
    case ErrorKind::HeightIterationOverflow: return "height-iteration-overflow";
    case ErrorKind::InconsistentEnclosure: return "inconsistent-enclosure";
    case ErrorKind::UnsupportedMap: return "unsupported-map";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorKind::Domain, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0 || r.get_den() == 0)
    throw Error(ErrorKind::Parse, "not a rational number: " + text);
  r.canonicalize();
  return r;
}

double log_abs(const Integer& n) {
  if (n == 0) throw Error(ErrorKind::Domain, "log of zero");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

bool is_probable_prime(const Integer& n) {
  if (n < 2) return false;
  // BPSW plus 25 Miller-Rabin rounds; deterministic below 2^64.
  return mpz_probab_prime_p(n.get_mpz_t(), 25) > 0;
}

Place Place::prime(const Integer& p) {
  if (!is_probable_prime(p))
    throw Error(ErrorKind::Domain, p.get_str() + " is not prime");
  Place v;
  v.archimedean_ = false;
  v.p_ = p;
  return v;
}

std::string Place::to_string() const {
  return archimedean_ ? std::string("inf") : p_.get_str();
}

Integer Factorization::product() const {
  Integer n = unit_sign;
  for (const auto& [p, e] : factors) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    n *= pe;
  }
  return n;
}

namespace {

class StepBudget {
 public:
  explicit StepBudget(std::uint64_t limit) : left_(limit) {}
  bool spend(std::uint64_t k = 1) {
    if (left_ < k) {
      left_ = 0;
      return false;
    }
    left_ -= k;
    return true;
  }

 private:
  std::uint64_t left_;
};

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0 when
// the budget runs out.
Integer rho_factor(const Integer& n, StepBudget& budget, std::uint64_t& rng) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (;;) {
    Integer c = Integer(static_cast<unsigned long>(splitmix(rng) % 1000003)) + 1;
    Integer y = Integer(static_cast<unsigned long>(splitmix(rng) % 1000003));
    Integer g = 1, q = 1, x, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto step = [&](Integer& t) {
      t = t * t + c;
      t %= n;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        unsigned long lim = std::min(m, r - k);
        if (!budget.spend(lim)) return 0;
        for (unsigned long i = 0; i < lim; ++i) {
          step(y);
          Integer diff = x - y;
          q = (q * abs(diff)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        if (!budget.spend()) return 0;
        step(ys);
        Integer diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        g = abs(g);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace

Factorization factorize(const Integer& n, std::uint64_t budget,
                        std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::Domain, "cannot factor zero");
  StepBudget steps(budget);
  std::map<Integer, unsigned long> found;
  Integer m = abs(n);

  for (unsigned long p = 2; p < (1UL << 16); p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > m) break;
    if (!steps.spend()) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      m /= p;
      ++found[Integer(p)];
    }
  }

  Factorization out;
  out.unit_sign = sgn(n) < 0 ? -1 : 1;
  std::vector<Integer> pending;
  if (m > 1) pending.push_back(m);
  std::uint64_t rng = seed;
  Integer leftover = 1;
  while (!pending.empty()) {
    Integer c = pending.back();
    pending.pop_back();
    if (c == 1) continue;
    if (is_probable_prime(c)) {
      ++found[c];
      continue;
    }
    mpz_class root;
    if (mpz_perfect_square_p(c.get_mpz_t())) {
      mpz_sqrt(root.get_mpz_t(), c.get_mpz_t());
      pending.push_back(root);
      pending.push_back(root);
      continue;
    }
    Integer g = rho_factor(c, steps, rng);
    if (g == 0) {
      leftover *= c;
      for (const auto& rest : pending) leftover *= rest;
      for (const auto& [p, e] : found) out.factors.emplace_back(p, e);
      throw FactorizationTimeout(out, leftover);
    }
    pending.push_back(g);
    pending.push_back(c / g);
  }
  for (const auto& [p, e] : found) out.factors.emplace_back(p, e);
  return out;
}

long valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw Error(ErrorKind::Domain, "valuation of zero");
  Integer r;
  return static_cast<long>(
      mpz_remove(r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rational& x, const Integer& p) {
  return valuation(Integer(x.get_num()), p) - valuation(Integer(x.get_den()), p);
}

double log_abs(const Rational& x, const Place& v) {
  if (x == 0) throw Error(ErrorKind::Domain, "log_abs of zero");
  if (v.is_archimedean())
    return log_abs(Integer(x.get_num())) - log_abs(Integer(x.get_den()));
  return -static_cast<double>(valuation(x, v.p())) * log_abs(v.p());
}

std::vector<Integer> prime_support(const Rational& x, std::uint64_t budget) {
  if (x == 0) throw Error(ErrorKind::Domain, "prime support of zero");
  std::vector<Integer> primes;
  for (const auto& [p, e] : factorize(Integer(x.get_num()), budget).factors)
    primes.push_back(p);
  for (const auto& [p, e] : factorize(Integer(x.get_den()), budget).factors)
    primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  return primes;
}

double product_formula_residual(const Rational& x, std::uint64_t budget) {
  double sum = log_abs(x, Place::archimedean());
  for (const auto& p : prime_support(x, budget))
    sum += -static_cast<double>(valuation(x, p)) * log_abs(p);
  return sum;
}

}  // namespace adelic

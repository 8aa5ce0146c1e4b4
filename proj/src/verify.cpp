#include "adelic/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "adelic/global_norm.hpp"
#include "adelic/heights.hpp"
#include "adelic/local_energy.hpp"

namespace adelic {

namespace {

const double kLog2 = std::numbers::ln2;
const double kInf = std::numeric_limits<double>::infinity();

// Golden-ratio constant log((3 + sqrt 5)/2), written out independently of
// the library's own value.
double golden_log() { return std::log((3 + std::sqrt(5.0)) / 2); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

CheckRow near(std::string check, double target, double got, double tol) {
  return {std::move(check), num(target) + " +- " + num(tol), got, tol - std::fabs(got - target)};
}

CheckRow inside(std::string check, const EnergyInterval& e, double got) {
  return {std::move(check), "[" + num(e.lo) + ", " + num(e.hi) + "]", got,
          std::min(got - e.lo, e.hi - got)};
}

CheckRow at_least(std::string check, double bound, double got) {
  return {std::move(check), ">= " + num(bound), got, got - bound};
}

CheckRow at_most(std::string check, double bound, double got) {
  return {std::move(check), "<= " + num(bound), got, bound - got};
}

CheckRow failure(const std::string& check, const std::exception& e) {
  return {check + " (" + e.what() + ")", "no error", std::numeric_limits<double>::quiet_NaN(), -kInf};
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  long nonzero(long lo, long hi) {
    long v;
    do v = range(lo, hi);
    while (v == 0);
    return v;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53; }
  Rational rational(long max_num, long max_den) { return make_rational(range(-max_num, max_num), range(1, max_den)); }
  IntegerPolynomial polynomial(int degree, long bound) {
    std::vector<Integer> c;
    for (int i = 0; i < degree; ++i) c.emplace_back(range(-bound, bound));
    c.emplace_back(nonzero(-bound, bound));
    return IntegerPolynomial(c);
  }

 private:
  std::uint64_t s_;
};

std::vector<RationalMap> random_maps(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<RationalMap> out;
  while (static_cast<int>(out.size()) < count) {
    const int d = static_cast<int>(rng.range(2, 3));
    try {
      RationalMap f = normalize(rng.polynomial(d, 9), rng.polynomial(static_cast<int>(rng.range(0, d)), 9));
      if (f.degree() >= 2) out.push_back(f);
    } catch (const Error&) {
    }
  }
  return out;
}

// Primitive squarefree quadratic with nonzero constant term.
IntegerPolynomial random_quadratic(Rng& rng) {
  for (;;) {
    IntegerPolynomial f{rng.nonzero(-30, 30), rng.range(-30, 30), rng.nonzero(1, 30)};
    const Integer disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(0) * f.coeff(2);
    if (disc != 0) return f.primitive_part();
  }
}

IntegerPolynomial reversed(const IntegerPolynomial& f) {
  std::vector<Integer> c = f.coefficients();
  std::reverse(c.begin(), c.end());
  return IntegerPolynomial(c);
}

WeightedPointMeasure random_mass_zero(Rng& rng, int atoms, bool rational) {
  WeightedPointMeasure m;
  double sum = 0;
  for (int i = 0; i < atoms; ++i) {
    SpherePoint p;
    if (rational)
      p = rng.rational(30, 30);
    else
      p = Cld(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const double w = i + 1 < atoms ? rng.uniform(-1, 1) : -sum;
    sum += w;
    m.atoms.push_back({p, w});
  }
  return m;
}

struct Worst {
  double slack = kInf;
  double got = 0;
  std::string where;

  void offer(double s, double g, const std::string& w) {
    if (!(s >= slack)) {
      slack = s;
      got = g;
      where = w;
    }
  }
};

int small_points_periods(int d, long cap) {
  int n = 1;
  while (std::pow(static_cast<double>(d), n + 1) <= static_cast<double>(cap)) ++n;
  return n;
}

using Clock = std::chrono::steady_clock;

template <class Body>
CriterionResult timed(int id, std::string title, double budget, Body body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.budget_seconds = budget;
  const auto start = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.rows.push_back(failure("completed without error", e));
    r.info.push_back(std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

}  // namespace

bool CriterionResult::pass() const {
  if (!within_budget() || rows.empty()) return false;
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& c) { return c.pass(); });
}

std::vector<RationalMap> example_maps() {
  const RationalMap half_square = normalize(IntegerPolynomial{0, 0, 1}, IntegerPolynomial{2});
  std::vector<RationalMap> maps{power_map(2),
                                power_map(3),
                                chebyshev(2),
                                chebyshev(3),
                                chebyshev(4),
                                normalize(IntegerPolynomial{-1, 0, 1}, IntegerPolynomial{1}),
                                normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2}),
                                half_square};
  const std::vector<std::pair<Rational, Rational>> conj{
      {2, 0}, {Rational(1, 2), 0}, {1, 1}, {2, 3}};
  for (const auto& [a, b] : conj) maps.push_back(conjugate_power_map(2, a, b));
  for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 1}, {1, 2}, {2, 3}, {5, 6}})
    maps.push_back(lattes(a, b));
  std::vector<RationalMap> unique;
  for (const auto& f : maps)
    if (std::find(unique.begin(), unique.end(), f) == unique.end()) unique.push_back(f);
  return unique;
}

std::vector<CheckRow> quad_selftest(const SphereQuadrature& quad) {
  quad.validate();
  std::vector<CheckRow> rows;
  auto add = [&](const std::string& name, const std::function<CheckRow()>& check) {
    try {
      rows.push_back(check());
    } catch (const std::exception& e) {
      rows.push_back(failure(name, e));
    }
  };
  add("gauss-legendre", [] {
    const GaussRule& g = gauss_legendre(16);
    long double s = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 30);
    return near("gauss-legendre 16 nodes, x^30 on [-1, 1]", 2.0 / 31, static_cast<double>(s), 1e-15);
  });
  add("total mass", [&] {
    return near("total mass of the Arakelov measure", 1.0, sphere_integral([](Cld) { return 1.0L; }, quad).value,
                1e-12);
  });
  add("log sqrt(1 + |z|^2)", [&] {
    const auto g = [](Cld z) { return 0.5L * std::log1p(std::norm(z)); };
    return near("integral of log sqrt(1 + |z|^2)", 0.5, sphere_integral(g, quad, {std::nullopt}).value, 1e-10);
  });
  add("outer log|z|", [&] {
    const auto g = [](Cld z) { return std::log(std::abs(z)); };
    return near("outer integral of log|z|", 0.5 * kLog2, outer_integral(g, quad, {std::nullopt}).value, 1e-8);
  });
  add("circle self-energy", [&] { return near("circle self-energy", kLog2, circle_self_energy(quad).value, 1e-6); });
  for (auto [x, y] : std::vector<std::pair<long, long>>{{1, 0}, {1, 1}, {2, 3}, {-7, 5}}) {
    const std::string name = "jensen integral (" + std::to_string(x) + ", " + std::to_string(y) + ")";
    add(name, [&, x = x, y = y] {
      return near(name, 0.5 * std::log(static_cast<double>(x * x + y * y)), jensen_quadrature(x, y, quad).value,
                  1e-8);
    });
  }
  return rows;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_done) {
  const SphereQuadrature& quad = options.quad;
  std::vector<CriterionResult> out;
  auto done = [&](CriterionResult r) {
    if (on_done) on_done(r);
    out.push_back(std::move(r));
  };
  const double c = golden_log();

  done(timed(1, "standard-measure norm", 1.0, [&](CriterionResult& r) {
    r.rows.push_back(near("circle self-energy", kLog2, circle_self_energy(quad).value, 1e-6));
  }));

  done(timed(2, "jensen closed forms", 5.0, [&](CriterionResult& r) {
    Rng rng(options.seed ^ 2);
    Worst w;
    for (int t = 0; t < 20;) {
      const Rational x = rng.rational(50, 20), y = rng.rational(50, 20);
      if (x == 0 && y == 0) continue;
      ++t;
      const double xd = x.get_d(), yd = y.get_d();
      const double expect = std::log(std::hypot(xd, yd));
      const double got = jensen_quadrature(x, y, quad).value;
      w.offer(1e-8 - std::fabs(got - expect), got, "(" + x.get_str() + ", " + y.get_str() + ")");
    }
    r.rows.push_back({"20 random pairs, worst " + w.where, "log sqrt(x^2 + y^2) +- 1e-08", w.got, w.slack});
    r.rows.push_back(near("outer integral of log|z|", 0.5 * kLog2,
                          outer_integral([](Cld z) { return std::log(std::abs(z)); }, quad, {std::nullopt}).value,
                          1e-8));
  }));

  done(timed(3, "arakelov-measure norm", 5.0, [&](CriterionResult& r) {
    const RationalMap identity = normalize(IntegerPolynomial{0, 1}, IntegerPolynomial{1});
    r.rows.push_back(near("energy of the identity pull-back", 0.5, pullback_energy_global(identity, quad).total, 1e-8));
  }));

  done(timed(4, "chebyshev", 60.0, [&](CriterionResult& r) {
    r.rows.push_back(inside("T2 enclosure, depth 3", norm_enclosure(chebyshev(2), 3, quad), c));
    r.rows.push_back(inside("T3 enclosure, depth 2", norm_enclosure(chebyshev(3), 2, quad), c));
    const MonteCarloEstimate mc = norm_monte_carlo(chebyshev(2), 100000, 20, options.mc_seed);
    r.rows.push_back(near("T2 monte carlo, 1e5 samples, 3 stderr", c, mc.value, 3 * mc.std_error));
    r.rows.push_back(near("T2 small points, n = 8", c, norm_small_points(chebyshev(2), 8).value, 0.05));
  }));

  done(timed(5, "power maps", 30.0, [&](CriterionResult& r) {
    r.rows.push_back(inside("z^2 enclosure, depth 3", norm_enclosure(power_map(2), 3, quad), kLog2));
    r.rows.push_back(inside("z^3 enclosure, depth 2", norm_enclosure(power_map(3), 2, quad), kLog2));
    r.rows.push_back(near("z^2 monte carlo", kLog2, norm_monte_carlo(power_map(2), 100000, 20, options.mc_seed).value,
                          1e-3));
  }));

  done(timed(6, "conjugated power maps", 60.0, [&](CriterionResult& r) {
    const std::vector<std::pair<Rational, Rational>> pairs{{1, 0}, {2, 0}, {Rational(1, 2), 0}, {1, 1}, {2, 3}};
    for (const auto& [a, b] : pairs)
      r.rows.push_back(inside("(a, b) = (" + a.get_str() + ", " + b.get_str() + "), depth 2",
                              norm_enclosure(conjugate_power_map(2, a, b), 2, quad),
                              closed_form_conjugated_power(a, b)));
  }));

  // Criteria 7 and 8 share the battery and its enclosures.
  std::vector<RationalMap> battery = example_maps();
  for (const auto& f : random_maps(options.seed ^ 7, 20)) battery.push_back(f);
  std::vector<EnergyInterval> enclosures(battery.size());
  std::vector<bool> have(battery.size(), false);

  done(timed(7, "explicit bounds battery", 300.0, [&](CriterionResult& r) {
    Worst lower, upper;
    int violations = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const ExplicitBoundsReport b = verify_explicit_bounds(battery[i], quad);
      enclosures[i] = b.enclosure;
      have[i] = true;
      lower.offer(b.lower_slack, 0.5 * battery[i].degree() * b.enclosure.hi, render(battery[i]));
      upper.offer(b.upper_slack, 0.5 * battery[i].degree() * b.enclosure.lo, render(battery[i]));
      if (!b.holds) {
        ++violations;
        r.info.push_back("violation: " + render(battery[i]));
      }
    }
    r.rows.push_back({"lower bound, worst " + lower.where, "(d/2) hi >= lower", lower.got, lower.slack});
    r.rows.push_back({"upper bound, worst " + upper.where, "(d/2) lo <= upper", upper.got, upper.slack});
    r.rows.push_back({"violations over " + std::to_string(battery.size()) + " maps", "0",
                      static_cast<double>(violations), violations == 0 ? 0.0 : -static_cast<double>(violations)});
  }));

  done(timed(8, "small-point floor", 300.0, [&](CriterionResult& r) {
    Worst hi, small;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const RationalMap& f = battery[i];
      const EnergyInterval e = have[i] ? enclosures[i] : norm_enclosure(f, default_depth(f.degree()), quad);
      hi.offer(e.hi - (kLog2 - 1e-6), e.hi, render(f));
      const int n = small_points_periods(f.degree(), 256);
      const double v = norm_small_points(f, n).value;
      small.offer(v - (kLog2 - 0.05), v, render(f) + " (n = " + std::to_string(n) + ")");
    }
    r.rows.push_back({"enclosure hi, worst " + hi.where, ">= " + num(kLog2 - 1e-6), hi.got, hi.slack});
    r.rows.push_back({"small points, worst " + small.where, ">= " + num(kLog2 - 0.05), small.got, small.slack});
    r.info.push_back("enclosures shared with criterion 7");
  }));

  done(timed(9, "lattes lower bound", 180.0, [&](CriterionResult& r) {
    for (auto [a, b] : std::vector<std::pair<long, long>>{{1, 2}, {2, 3}, {5, 6}}) {
      const LattesReport l = lattes_lower_check(a, b, quad, 0.05);
      const double bound = std::log(static_cast<double>(a * b)) - 0.05;
      const std::string name = "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
      r.rows.push_back(at_least(name + " enclosure hi", bound, l.enclosure.hi));
      if (l.small_points) r.rows.push_back(at_least(name + " small points", bound, *l.small_points));
    }
  }));

  done(timed(10, "height identities", 30.0, [&](CriterionResult& r) {
    Rng rng(options.seed ^ 10);
    Worst exact_w, inv_w, pow_w;
    for (int t = 0; t < 200; ++t) {
      const Rational x = make_rational(rng.range(-1000000, 1000000), rng.range(1, 1000000));
      const double expect = std::log(std::hypot(x.get_num().get_d(), x.get_den().get_d()));
      const double got = arakelov_height(x).value;
      exact_w.offer(1e-14 * std::max(1.0, expect) - std::fabs(got - expect), got, x.get_str());
      if (x != 0) {
        const double inv = arakelov_height(Rational(1 / x)).value;
        inv_w.offer(1e-12 - std::fabs(got - inv), got - inv, x.get_str());
      }
      const double id = arakelov_height(x).value - standard_potential(x) + 0.5 * kLog2;
      pow_w.offer(1e-10 - std::fabs(naive_height(x).value - id), naive_height(x).value - id, x.get_str());
    }
    for (int t = 0; t < 20; ++t) {
      const IntegerPolynomial q = random_quadratic(rng);
      const AlgebraicOrbit a(q), b(reversed(q));
      const double ha = arakelov_height(a).value;
      inv_w.offer(1e-12 - std::fabs(ha - arakelov_height(b).value), ha - arakelov_height(b).value, q.to_string());
      const double id = ha - standard_potential(a) + 0.5 * kLog2;
      pow_w.offer(1e-10 - std::fabs(naive_height(a).value - id), naive_height(a).value - id, q.to_string());
    }
    r.rows.push_back({"h_Ar(p/q) = log sqrt(p^2 + q^2), worst " + exact_w.where, "rel 1e-14", exact_w.got,
                      exact_w.slack});
    r.rows.push_back({"h_Ar(a) = h_Ar(1/a), worst " + inv_w.where, "difference +- 1e-12", inv_w.got, inv_w.slack});
    r.rows.push_back({"h = h_Ar - U_std + log2/2, worst " + pow_w.where, "difference +- 1e-10", pow_w.got,
                      pow_w.slack});

    const double theta = theta_constant();
    r.rows.push_back(near("theta", 3.38298, theta, 5e-6));
    r.rows.push_back(near("theta^3 - 3 theta^2 - theta - 1", 0.0,
                          ((theta - 3) * theta - 1) * theta - 1, 1e-12));
    int failures = 0;
    Worst lower, upper, floor_w, sqrt_w;
    for (int t = 0; t < 1000; ++t) {
      HeightInequalityReport h;
      std::string where;
      if (t % 4 == 3) {
        const IntegerPolynomial q = random_quadratic(rng);
        h = check_height_inequalities(AlgebraicOrbit(q));
        where = q.to_string();
      } else {
        const Rational x = rng.rational(100000, 100000);
        h = check_height_inequalities(x);
        where = x.get_str();
      }
      if (!h.holds) ++failures;
      lower.offer(h.lower_slack, h.lower_slack, where);
      upper.offer(h.upper_slack, h.upper_slack, where);
      sqrt_w.offer(h.sqrt_slack, h.sqrt_slack, where);
      if (h.floor_applies) floor_w.offer(h.floor_slack, h.floor_slack, where);
    }
    r.rows.push_back({"h >= h_Ar - log2/2, worst " + lower.where, "slack >= 0", lower.got, lower.slack});
    r.rows.push_back({"h <= h_Ar, worst " + upper.where, "slack >= 0", upper.got, upper.slack});
    r.rows.push_back({"h_Ar >= log2/2, worst " + floor_w.where, "slack >= 0", floor_w.got, floor_w.slack});
    r.rows.push_back({"square-root bound, worst " + sqrt_w.where, "slack >= 0", sqrt_w.got, sqrt_w.slack});
    r.rows.push_back({"inequality failures over 1000 inputs", "0", static_cast<double>(failures),
                      failures == 0 ? 0.0 : -static_cast<double>(failures)});
  }));

  done(timed(11, "arakelov-zhang pairing", 180.0, [&](CriterionResult& r) {
    AZOptions single;
    single.symmetric = false;
    single.quad = quad;
    const AZReport same = az_pairing(power_map(2), power_map(2), 8, 8, 1e-6, single);
    r.rows.push_back(near("(z^2, z^2)", 0.0, same.estimate, 1e-6));
    const double tol = 1e-3;
    AZOptions both;
    both.quad = quad;
    const AZReport t = az_pairing(chebyshev(2), power_map(2), 8, 8, tol, both);
    if (t.envelope)
      r.rows.push_back(inside("(T2, z^2) in the enclosure envelope", *t.envelope, t.estimate));
    else
      r.rows.push_back({"(T2, z^2) envelope", "present", 0, -1});
    r.rows.push_back(near("(T2, z^2) symmetric check", t.estimate, t.symmetric_check.value_or(kInf), 5 * tol));
  }));

  done(timed(12, "structural properties", 120.0, [&](CriterionResult& r) {
    Rng rng(options.seed ^ 12);
    double pos = kInf, cs = kInf;
    int literal_negative = 0;
    for (int t = 0; t < 200; ++t) {
      const auto mu = random_mass_zero(rng, static_cast<int>(rng.range(2, 6)), t % 2);
      const auto nu = random_mass_zero(rng, static_cast<int>(rng.range(2, 6)), t % 3 == 0);
      const double eps = 0.49 * min_chordal_separation({&mu, &nu});
      const double mm = smoothed_energy(mu, mu, eps), nn = smoothed_energy(nu, nu, eps);
      const double mn = smoothed_energy(mu, nu, eps);
      pos = std::min({pos, mm, nn});
      cs = std::min(cs, mm * nn - mn * mn);
      if (discrete_energy(mu, mu).value < -1e-9) ++literal_negative;
      if (discrete_energy(nu, nu).value < -1e-9) ++literal_negative;
    }
    r.rows.push_back(at_least("positivity, 200 trials (smoothed)", -1e-9, pos));
    r.rows.push_back(at_least("cauchy-schwarz, 200 trials (smoothed)", -1e-9, cs));
    r.info.push_back("off-diagonal discrete self-energies below -1e-9: " + std::to_string(literal_negative) +
                     " of 400");

    const std::vector<RationalMap> maps{power_map(2), chebyshev(2),
                                        normalize(IntegerPolynomial{1, 0, 1}, IntegerPolynomial{0, 2})};
    double adjoint = 0;
    for (const auto& f : maps)
      for (int t = 0; t < 50; ++t) {
        const auto mu = random_mass_zero(rng, static_cast<int>(rng.range(2, 4)), true);
        const auto nu = random_mass_zero(rng, static_cast<int>(rng.range(2, 4)), false);
        const double lhs = discrete_energy(pullback_measure(f, mu), nu).value;
        const double rhs = discrete_energy(mu, pushforward_measure(f, nu)).value;
        adjoint = std::max(adjoint, std::fabs(lhs - rhs));
      }
    r.rows.push_back(at_most("adjoint identity, 150 pairs", 1e-7, adjoint));

    double product = 0;
    for (const auto& f : battery) {
      const EnergyBreakdown b = pullback_energy_global(f, quad);
      double sum = 0;
      for (const auto& p : b.per_place) sum += p.value;
      product = std::max({product, std::fabs(b.total - b.shortcut), std::fabs(sum - b.shortcut)});
    }
    r.rows.push_back(at_most("product-formula shortcut, " + std::to_string(battery.size()) + " maps", 1e-7, product));
  }));

  return out;
}

}  // namespace adelic

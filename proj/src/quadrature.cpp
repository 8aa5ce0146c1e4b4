#include "adelic/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "adelic/error.hpp"
#include "adelic/parallel.hpp"

namespace adelic {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kGrading = 0.2L;
constexpr int kGradedLevels = 22;  // 0.2^22 < 1e-15
constexpr int kRadialGradedLevels = 16;
constexpr long double kAngularNear = 0.85L;
constexpr long double kEdgeReach = 0.05L;

struct Panel {
  long double a, b;
  int n;
};

// [a, b] split geometrically toward each end with a positive level count.
void graded_panels(long double a, long double b, int levels_a, int levels_b, int n_smooth,
                   int n_graded, std::vector<Panel>& out) {
  if (b <= a) return;
  if (levels_a <= 0 && levels_b <= 0) {
    out.push_back({a, b, n_smooth});
    return;
  }
  if (levels_a > 0 && levels_b > 0) {
    const long double m = 0.5L * (a + b);
    graded_panels(a, m, levels_a, 0, (n_smooth + 1) / 2, n_graded, out);
    graded_panels(m, b, 0, levels_b, (n_smooth + 1) / 2, n_graded, out);
    return;
  }
  const bool toward_a = levels_a > 0;
  const int levels = toward_a ? levels_a : levels_b;
  const long double h = b - a;
  // Never coarser than the smooth rule's density.
  auto nodes = [&](long double len) {
    return std::max(n_graded, static_cast<int>(std::ceil(n_smooth * len / h)));
  };
  long double s = 1;
  for (int k = 0; k < levels; ++k) {
    const long double outer = s * h, inner = s * kGrading * h;
    if (toward_a)
      out.push_back({a + inner, a + outer, nodes(outer - inner)});
    else
      out.push_back({b - outer, b - inner, nodes(outer - inner)});
    s *= kGrading;
  }
  if (toward_a)
    out.push_back({a, a + s * h, n_graded});
  else
    out.push_back({b - s * h, b, n_graded});
}

// Levels until the innermost panel is below scale / 4; the full depth for
// a true singularity.
int levels_for(long double scale, long double h, int full) {
  if (scale <= 0) return full;
  const long double need = std::log(scale / (4 * h)) / std::log(kGrading);
  return std::clamp(static_cast<int>(std::ceil(need)), 1, full);
}

// Nodes and weights of the composite rule over the given panels.
void panel_nodes(const std::vector<Panel>& panels, std::vector<long double>& x,
                 std::vector<long double>& w) {
  for (const auto& p : panels) {
    const GaussRule& g = gauss_legendre(p.n);
    const long double half = 0.5L * (p.b - p.a), mid = 0.5L * (p.a + p.b);
    for (int i = 0; i < p.n; ++i) {
      x.push_back(mid + half * g.nodes[i]);
      w.push_back(half * g.weights[i]);
    }
  }
}

long double u_of_r(long double r) { return r * r / (1 + r * r); }

struct RingRule {
  std::vector<long double> theta, weight;  // weights sum to 1
  std::vector<Cld> unit;                   // e^{i theta}

  void finish() {
    unit.clear();
    for (auto t : theta) unit.push_back(std::polar(1.0L, t));
  }
};

RingRule trapezoid(int n) {
  RingRule r;
  for (int j = 0; j < n; ++j) {
    r.theta.push_back(2 * kPi * j / n);
    r.weight.push_back(1.0L / n);
  }
  r.finish();
  return r;
}

// Grading stops once panels are a fifth of the relative ring distance
// delta, below which the integrand is smooth on the panel scale.
int angular_levels(long double delta) {
  const long double need = std::log(std::max(delta, 1e-300L) / (5 * kPi)) / std::log(kGrading);
  return std::clamp(static_cast<int>(std::ceil(need)), 1, kGradedLevels);
}

RingRule graded_ring(std::vector<long double> angles, int levels, int angular, int n_graded) {
  for (auto& a : angles) {
    a = std::fmod(a, 2 * kPi);
    if (a < 0) a += 2 * kPi;
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  std::vector<Panel> panels;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    long double a = angles[k];
    long double b = k + 1 < angles.size() ? angles[k + 1] : angles[0] + 2 * kPi;
    const int n_smooth = static_cast<int>(std::ceil(angular * (b - a) / (2 * kPi)));
    graded_panels(a, b, levels, levels, n_smooth, n_graded, panels);
  }
  RingRule r;
  panel_nodes(panels, r.theta, r.weight);
  for (auto& w : r.weight) w /= 2 * kPi;
  r.finish();
  return r;
}

[[noreturn]] void not_converged(const char* what, double prev, double last) {
  std::ostringstream os;
  os.precision(17);
  os << what << " did not converge: last two levels " << prev << ", " << last;
  throw Error(ErrorKind::Numerical, os.str());
}

template <class Rule>
QuadratureValue refine(const SphereQuadrature& quad, const char* what, Rule&& rule) {
  quad.validate();
  long double prev = rule(quad.radial_nodes, quad.angular_nodes);
  for (int k = 1; k <= quad.refinement_levels; ++k) {
    long double v = rule(quad.radial_nodes << k, quad.angular_nodes << k);
    const double diff = static_cast<double>(std::fabs(v - prev));
    const double scale = std::max(1.0, std::fabs(static_cast<double>(v)));
    QuadratureValue out{static_cast<double>(v), 10 * diff + 1e-15 * scale, k + 1};
    if (out.error <= quad.tol * scale) return out;
    if (k == quad.refinement_levels) not_converged(what, static_cast<double>(prev), out.value);
    prev = v;
  }
  // refinement_levels == 0: a single level with no error estimate available.
  return {static_cast<double>(prev), 0, 1};
}

std::vector<SingularPoint> inverted(const std::vector<SingularPoint>& singular) {
  std::vector<SingularPoint> out;
  for (const auto& c : singular) {
    if (!c.at)
      out.emplace_back(Cld(0), c.width);
    else if (*c.at != Cld(0))
      out.emplace_back(Cld(1) / *c.at, c.width / std::norm(*c.at));
  }
  return out;
}

}  // namespace

void SphereQuadrature::validate() const {
  if (radial_nodes < 8 || angular_nodes < 8)
    throw Error(ErrorKind::Domain, "quadrature node counts must be at least 8");
  if (!(tol > 0)) throw Error(ErrorKind::Domain, "quadrature tolerance must be positive");
  if (refinement_levels < 0 || refinement_levels > 8)
    throw Error(ErrorKind::Domain, "refinement levels must lie in [0, 8]");
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;
  if (n < 1) throw Error(ErrorKind::Domain, "Gauss-Legendre rule needs n >= 1");

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  auto rule = std::make_unique<GaussRule>();
  for (int i = 0; i < n; ++i) {
    long double x = eig.eigenvalues()(i), dp = 1;
    for (int it = 0; it < 6; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      x -= p1 / dp;
    }
    rule->nodes.push_back(x);
    rule->weights.push_back(2 / ((1 - x * x) * dp * dp));
  }
  slot = std::move(rule);
  return *slot;
}

long double disk_rule(const SphereIntegrand& g, int radial, int angular,
                      const std::vector<SingularPoint>& singular) {
  const int n_graded = std::max(8, 3 * radial / 16);
  // Radial breaks in u with the length scale to grade toward (0 for a true
  // singularity, negative for none).
  std::map<long double, long double> breaks{{0.0L, -1.0L}, {0.5L, -1.0L}};
  auto add_break = [&](long double u, long double scale) {
    auto [it, inserted] = breaks.try_emplace(u, scale);
    if (!inserted && (it->second < 0 || scale < it->second)) it->second = scale;
  };
  struct Near {
    Cld c;
    long double width;
  };
  std::vector<Near> ring_singular;
  for (const auto& s : singular) {
    if (!s.at) continue;
    const Cld c = *s.at;
    const long double r = std::abs(c);
    // du/dr = 2r / (1 + r²)².
    const long double scale_u = s.width * 2 * std::max(r, s.width) / ((1 + r * r) * (1 + r * r));
    if (r <= s.width) {
      add_break(0, scale_u);
      if (r == 0) continue;
    }
    ring_singular.push_back({c, s.width});
    if (std::fabs(r - 1) <= 1e-15L)
      add_break(0.5L, scale_u);
    else if (r < 1)
      add_break(u_of_r(r), scale_u);
    else if (u_of_r(r) - 0.5L + scale_u < kEdgeReach)
      add_break(0.5L, u_of_r(r) - 0.5L + scale_u);
  }

  std::vector<Panel> panels;
  for (auto it = breaks.begin(); std::next(it) != breaks.end(); ++it) {
    const auto next = std::next(it);
    const long double h = next->first - it->first;
    const int la = it->second < 0 ? 0 : levels_for(it->second, h, kRadialGradedLevels);
    const int lb = next->second < 0 ? 0 : levels_for(next->second, h, kRadialGradedLevels);
    graded_panels(it->first, next->first, la, lb, radial, n_graded, panels);
  }
  std::vector<long double> us, ws;
  panel_nodes(panels, us, ws);

  // Angular rule per ring: the trapezoid, or a graded rule shared by all
  // rings with the same near singular points and grading depth.
  const int n_angular_graded = std::max(8, 3 * angular / 64);
  std::vector<RingRule> rules{trapezoid(angular)};
  std::map<std::pair<std::vector<long double>, int>, std::size_t> rule_index;
  std::vector<std::size_t> ring_rule(us.size(), 0);
  std::vector<long double> radius(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    const long double r = std::sqrt(us[i] / (1 - us[i]));
    radius[i] = r;
    std::vector<long double> near;
    long double delta = 1;
    for (const auto& s : ring_singular) {
      const long double rc = std::abs(s.c), rho = std::min(r, rc) / std::max(r, rc);
      const long double d = std::max(1 - rho, s.width / std::max(r, rc));
      if (rho > kAngularNear && d < 1 - kAngularNear) {
        near.push_back(std::arg(s.c));
        delta = std::min(delta, d);
      }
    }
    if (near.empty()) continue;
    const int levels = angular_levels(delta);
    auto [it, inserted] = rule_index.try_emplace(std::make_pair(near, levels), rules.size());
    if (inserted) rules.push_back(graded_ring(near, levels, angular, n_angular_graded));
    ring_rule[i] = it->second;
  }

  std::vector<long double> ring(us.size());
  parallel_for(us.size(), [&](std::size_t i) {
    const RingRule& rule = rules[ring_rule[i]];
    const long double r = radius[i];
    long double s = 0;
    for (std::size_t j = 0; j < rule.unit.size(); ++j) s += rule.weight[j] * g(r * rule.unit[j]);
    ring[i] = s;
  });
  long double total = 0;
  for (std::size_t i = 0; i < us.size(); ++i) total += ws[i] * ring[i];
  return total;
}

QuadratureValue disk_integral(const SphereIntegrand& g, const SphereQuadrature& quad,
                              const std::vector<SingularPoint>& singular) {
  return refine(quad, "disk quadrature",
                [&](int r, int a) { return disk_rule(g, r, a, singular); });
}

QuadratureValue outer_integral(const SphereIntegrand& g, const SphereQuadrature& quad,
                               const std::vector<SingularPoint>& singular) {
  auto h = [&](Cld w) { return g(Cld(1) / w); };
  return disk_integral(h, quad, inverted(singular));
}

QuadratureValue sphere_integral(const SphereIntegrand& g, const SphereQuadrature& quad,
                                const std::vector<SingularPoint>& singular) {
  QuadratureValue in = disk_integral(g, quad, singular);
  QuadratureValue out = outer_integral(g, quad, singular);
  return {in.value + out.value, in.error + out.error, std::max(in.levels, out.levels)};
}

QuadratureValue circle_self_energy(const SphereQuadrature& quad) {
  return refine(quad, "circle energy quadrature", [&](int, int angular) {
    std::vector<Panel> panels;
    graded_panels(0, 2 * kPi, kGradedLevels, kGradedLevels, std::max(8, angular / 16),
                  std::max(8, angular / 16), panels);
    std::vector<long double> phi, w;
    panel_nodes(panels, phi, w);
    std::vector<long double> rows(angular);
    parallel_for(rows.size(), [&](std::size_t j) {
      const long double t = 2 * kPi * j / angular;
      const Cld x = std::polar(1.0L, t);
      long double s = 0;
      for (std::size_t i = 0; i < phi.size(); ++i)
        s += w[i] * -std::log(std::abs(x - std::polar(1.0L, t + phi[i])) / 2);
      rows[j] = s / (2 * kPi);
    });
    long double total = 0;
    for (auto v : rows) total += v;
    return total / angular;
  });
}

}  // namespace adelic

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace adelic {

using Cld = std::complex<long double>;

// Tensor rule for the Arakelov measure dλ = dℓ(z) / (π (1 + |z|²)²):
// Gauss-Legendre in u = r²/(1 + r²) times the trapezoid rule in θ, since
// dλ = du dθ / 2π.
struct SphereQuadrature {
  int radial_nodes = 64;
  int angular_nodes = 256;
  double tol = 1e-9;
  int refinement_levels = 3;

  // Throws a domain error unless node counts are >= 8 and tol > 0.
  void validate() const;
};

struct QuadratureValue {
  double value = 0;
  double error = 0;  // 10 x the difference of the last two levels
  int levels = 0;
};

struct GaussRule {
  std::vector<long double> nodes;  // on [-1, 1], increasing
  std::vector<long double> weights;
};

// Cached; Golub-Welsch nodes polished by Newton on the Legendre recurrence.
const GaussRule& gauss_legendre(int n);

using SphereIntegrand = std::function<long double(Cld)>;

// A logarithmic singularity of the integrand (width 0), or a point near
// which it varies on the given length scale; std::nullopt is infinity.
struct SingularPoint {
  std::optional<Cld> at;
  long double width = 0;

  SingularPoint(std::nullopt_t) {}
  SingularPoint(Cld z, long double w = 0) : at(z), width(w) {}
};

// ∫_{|z| <= 1} g dλ at one fixed resolution. Singular points get radial
// panel breaks and angular grading.
long double disk_rule(const SphereIntegrand& g, int radial, int angular,
                      const std::vector<SingularPoint>& singular);

// Refined until 10 |v_k - v_{k-1}| <= tol max(1, |v_k|); throws a numerical
// error carrying the last two values otherwise.
QuadratureValue disk_integral(const SphereIntegrand& g, const SphereQuadrature& quad,
                              const std::vector<SingularPoint>& singular = {});

// ∫_{|z| >= 1} g dλ, computed on the unit disk through w = 1/z.
QuadratureValue outer_integral(const SphereIntegrand& g, const SphereQuadrature& quad,
                               const std::vector<SingularPoint>& singular = {});

QuadratureValue sphere_integral(const SphereIntegrand& g, const SphereQuadrature& quad,
                                const std::vector<SingularPoint>& singular = {});

// ∫∫ -log(|e^{it} - e^{is}| / 2) dt ds / (2π)², the self-energy of the
// uniform measure on the unit circle.
QuadratureValue circle_self_energy(const SphereQuadrature& quad);

}  // namespace adelic

#include "adelic/roots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <numbers>

#include "adelic/error.hpp"

namespace adelic {

using cld = std::complex<long double>;

namespace {

// p(z)/p'(z) by Horner, switching to the reversed polynomial outside the
// unit disk so intermediate powers stay bounded.
cld newton_ratio(const std::vector<cld>& a, cld z) {
  const int n = static_cast<int>(a.size()) - 1;
  if (std::abs(z) <= 1.0L) {
    cld p = a[n], dp = 0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[k];
    }
    return p / dp;
  }
  cld w = 1.0L / z;
  cld q = a[0], dq = 0;
  for (int k = 1; k <= n; ++k) {
    dq = dq * w + q;
    q = q * w + a[k];
  }
  return z * q / (static_cast<long double>(n) * q - w * dq);
}

}  // namespace

double backward_residual(const std::vector<cld>& a, cld z) {
  const int n = static_cast<int>(a.size()) - 1;
  long double num, den = 0;
  if (std::abs(z) <= 1.0L) {
    cld p = a[n];
    long double r = std::abs(z), s = std::abs(a[n]);
    for (int k = n - 1; k >= 0; --k) {
      p = p * z + a[k];
      s = s * r + std::abs(a[k]);
    }
    num = std::abs(p);
    den = s;
  } else {
    cld w = 1.0L / z;
    long double r = std::abs(w);
    cld q = a[0];
    long double s = std::abs(a[0]);
    for (int k = 1; k <= n; ++k) {
      q = q * w + a[k];
      s = s * r + std::abs(a[k]);
    }
    num = std::abs(q);
    den = s;
  }
  return den > 0 ? static_cast<double>(num / den) : 0.0;
}

std::vector<cld> newton_polygon_start(const std::vector<double>& la) {
  const int n = static_cast<int>(la.size()) - 1;
  std::vector<int> hull;
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(la[k])) continue;
    while (hull.size() >= 2) {
      int i = hull[hull.size() - 2], j = hull.back();
      // Drop j when it lies on or below the chord from i to k.
      double cross = (j - i) * (la[k] - la[i]) - (k - i) * (la[j] - la[i]);
      if (cross >= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  std::vector<cld> z;
  z.reserve(n);
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    int i = hull[e], j = hull[e + 1];
    int m = j - i;
    long double r = std::exp(static_cast<long double>(la[i] - la[j]) / m);
    for (int t = 0; t < m; ++t) {
      long double theta = two_pi * t / m + two_pi * i / n + 0.4L;
      z.push_back(std::polar(r, theta));
    }
  }
  return z;
}

ComplexRootSet solve_polynomial(const std::vector<cld>& coeffs, double tol) {
  std::vector<cld> a = coeffs;
  while (!a.empty() && a.back() == cld(0)) a.pop_back();
  if (a.size() < 2) throw Error(ErrorKind::Domain, "root finding needs degree >= 1");

  ComplexRootSet out;
  std::size_t zeros = 0;
  while (a[zeros] == cld(0)) ++zeros;
  a.erase(a.begin(), a.begin() + static_cast<long>(zeros));
  for (std::size_t k = 0; k < zeros; ++k) out.roots.emplace_back(0.0, 0.0);
  const int n = static_cast<int>(a.size()) - 1;
  if (n == 0) return out;

  std::vector<cld> z;
  bool companion_ok = n <= 100;
  std::vector<std::complex<double>> monic(n);
  for (int k = 0; k < n && companion_ok; ++k) {
    cld c = a[k] / a[n];
    if (!(std::abs(c) < 1e300L)) companion_ok = false;
    monic[k] = std::complex<double>(static_cast<double>(c.real()),
                                    static_cast<double>(c.imag()));
  }
  if (companion_ok) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    companion.diagonal(-1).setOnes();
    for (int k = 0; k < n; ++k) companion(k, n - 1) = -monic[k];
    balance_matrix(companion);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() == Eigen::Success) {
      for (int k = 0; k < n; ++k) {
        auto ev = solver.eigenvalues()(k);
        z.emplace_back(ev.real(), ev.imag());
      }
    }
  }
  if (z.empty()) {
    std::vector<double> la(n + 1);
    for (int k = 0; k <= n; ++k)
      la[k] = a[k] == cld(0) ? -std::numeric_limits<double>::infinity()
                             : static_cast<double>(std::log(std::abs(a[k])));
    z = newton_polygon_start(la);
  }

  const long double eps = std::numeric_limits<long double>::epsilon();
  aberth_iterate<long double>([&](cld x) { return newton_ratio(a, x); }, z, 400,
                              8 * eps);

  double worst = 0;
  for (const auto& r : z) worst = std::max(worst, backward_residual(a, r));
  if (!(worst <= tol))
    throw Error(ErrorKind::Numerical, "root finding did not converge: residual " +
                                          std::to_string(worst));
  for (const auto& r : z)
    out.roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  out.residual_bound = worst;
  return out;
}

}  // namespace adelic

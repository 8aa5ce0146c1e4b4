#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <vector>

namespace adelic {

struct ComplexRootSet {
  std::vector<std::complex<double>> roots;
  // max_i |F(r_i)| / sum_k |a_k| |r_i|^k
  double residual_bound = 0.0;
};

// Parlett-Reinsch balancing in place, for companion-type matrices.
template <typename Derived>
void balance_matrix(Eigen::MatrixBase<Derived>& m) {
  using std::abs;
  const int n = static_cast<int>(m.rows());
  const double kRadix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double row = 0, col = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        row += abs(m(i, j));
        col += abs(m(j, i));
      }
      if (row == 0 || col == 0) continue;
      double g = row / kRadix, f = 1.0;
      const double s = col + row;
      while (col < g) {
        f *= kRadix;
        col *= kRadix * kRadix;
      }
      g = row * kRadix;
      while (col > g) {
        f /= kRadix;
        col /= kRadix * kRadix;
      }
      if ((row + col) < 0.95 * s * f) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

// Simultaneous Aberth-Ehrlich iteration. newton(z) returns p(z)/p'(z).
// Returns the number of sweeps, or -1 if some root did not settle.
template <typename Real, typename Newton>
int aberth_iterate(Newton&& newton, std::vector<std::complex<Real>>& z,
                   int max_sweeps, Real step_tol) {
  using C = std::complex<Real>;
  const std::size_t n = z.size();
  std::vector<char> done(n, 0);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      C ratio = newton(z[i]);
      if (!std::isfinite(std::abs(ratio))) {
        z[i] += C(step_tol * 16, step_tol * 8) * (Real(1) + std::abs(z[i]));
        all = false;
        continue;
      }
      C s(0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s += Real(1) / (z[i] - z[j]);
      C w = ratio / (Real(1) - ratio * s);
      if (!std::isfinite(std::abs(w))) w = ratio;
      z[i] -= w;
      if (std::abs(w) <= step_tol * (Real(1) + std::abs(z[i])))
        done[i] = 1;
      else
        all = false;
    }
    if (all) return sweep;
  }
  return -1;
}

// Starting points on circles read off the upper convex hull of
// (k, log|a_k|). Zero coefficients are passed as -inf.
std::vector<std::complex<long double>> newton_polygon_start(
    const std::vector<double>& log_abs_coeffs);

// Roots of sum a_k z^k with complex coefficients, a_n != 0. Companion
// eigenvalues (balanced) for moderate degree, Newton-polygon starts above,
// then Aberth polishing in long double.
ComplexRootSet solve_polynomial(const std::vector<std::complex<long double>>& coeffs,
                                double tol);

double backward_residual(const std::vector<std::complex<long double>>& coeffs,
                         std::complex<long double> z);

}  // namespace adelic

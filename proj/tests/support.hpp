#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "adelic/exact.hpp"
#include "adelic/polynomial.hpp"

namespace testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  long range(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  long nonzero(long lo, long hi) {
    long v;
    do v = range(lo, hi);
    while (v == 0);
    return v;
  }
  adelic::Rational rational(long max_num, long max_den) {
    return adelic::make_rational(range(-max_num, max_num), range(1, max_den));
  }
  adelic::Rational nonzero_rational(long max_num, long max_den) {
    return adelic::make_rational(nonzero(-max_num, max_num), range(1, max_den));
  }
  adelic::IntegerPolynomial polynomial(int degree, long bound) {
    std::vector<adelic::Integer> c;
    for (int i = 0; i < degree; ++i) c.emplace_back(range(-bound, bound));
    c.emplace_back(nonzero(-bound, bound));
    return adelic::IntegerPolynomial(c);
  }

 private:
  std::uint64_t s_;
};

// Largest distance under a greedy nearest-neighbour pairing of two
// multisets of equal size.
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](auto u, auto v) {
      return std::abs(u - x) < std::abs(v - x);
    });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace testing

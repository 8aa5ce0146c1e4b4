#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adelic/quadrature.hpp"
#include "adelic/rational_map.hpp"

namespace adelic {

// One line of the verification table. slack is the signed margin by which
// the check holds; a row passes when slack >= 0.
struct CheckRow {
  std::string check;
  std::string expected;
  double got = 0;
  double slack = 0;

  bool pass() const { return slack >= 0; }
};

struct CriterionResult {
  int id = 0;
  std::string title;
  double budget_seconds = 0;
  double seconds = 0;
  std::vector<CheckRow> rows;
  std::vector<std::string> info;  // reported, not asserted

  bool within_budget() const { return seconds <= budget_seconds; }
  bool pass() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240917;  // random batteries
  std::uint64_t mc_seed = 1;
  SphereQuadrature quad;
};

// Named maps used across the batteries: power, Chebyshev, conjugated power
// and Lattès maps plus a few small rational maps.
std::vector<RationalMap> example_maps();

// Quadrature sanity checks: Gauss-Legendre exactness, total mass, the
// circle self-energy, ∫_{|z|>1} log|z| and Jensen integrals.
std::vector<CheckRow> quad_selftest(const SphereQuadrature& quad = {});

// The twelve acceptance criteria in order; on_done is called after each.
std::vector<CriterionResult> run_acceptance(
    const VerifyOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_done = {});

}  // namespace adelic

#include <array>
#include <cstdio>

#include "adelic/verify.hpp"

// Time budgets in seconds for criteria 1..12.
constexpr std::array<double, 12> kBudgets{1, 5, 5, 60, 30, 60, 300, 300, 180, 30, 180, 120};

int main() {
  int failed = 0;
  const auto results = adelic::run_acceptance({}, [&](const adelic::CriterionResult& r) {
    const double budget = kBudgets.at(static_cast<std::size_t>(r.id - 1));
    const bool budget_pinned = r.budget_seconds == budget;
    const bool pass = r.pass() && budget_pinned && r.seconds <= budget;
    if (!pass) ++failed;
    std::printf("criterion %2d %s  %-28s %8.2f s / %4.0f s\n", r.id, pass ? "PASS" : "FAIL", r.title.c_str(),
                r.seconds, budget);
    for (const auto& c : r.rows)
      if (!c.pass())
        std::printf("    failed: %s: expected %s, got %.12g, slack %.3g\n", c.check.c_str(), c.expected.c_str(), c.got,
                    c.slack);
    if (!budget_pinned) std::printf("    budget changed to %.0f s\n", r.budget_seconds);
    for (const auto& i : r.info) std::printf("    info: %s\n", i.c_str());
    std::fflush(stdout);
  });
  if (results.size() != kBudgets.size()) {
    std::printf("expected %zu criteria, ran %zu\n", kBudgets.size(), results.size());
    return 1;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}

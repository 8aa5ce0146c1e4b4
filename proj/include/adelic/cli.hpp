#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adelic::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

enum class Format { Json, Text };

struct RunConfig {
  double tol = 1e-6;
  std::optional<int> depth;  // unset: default_depth of the map
  long samples = 100000;
  std::uint64_t seed = 1;
  int period_max = 8;
  int telescope_max = 8;
  Format format = Format::Json;
  std::optional<int> threads;  // unset: library default

  // Empty when valid, otherwise the first problem found.
  std::string validate() const;
};

struct RunOutput {
  int exit_code = kExitOk;
  std::string out;  // JSON or text, newline-terminated
  std::string err;  // diagnostics
};

// norm, az, height, map-info, verify, quad-selftest.
const std::vector<std::string>& commands();

// args are map expressions or map JSON objects, except for height, whose
// first argument is a point: a rational, "inf", or a polynomial whose roots
// form the orbit; an optional second argument is the map for the canonical
// height.
RunOutput run(const std::string& command, const std::vector<std::string>& args, const RunConfig& config);

}  // namespace adelic::cli

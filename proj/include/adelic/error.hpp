#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adelic {

enum class ErrorKind {
  Domain,
  FactorizationTimeout,
  Numerical,
  OrbitAtInfinity,
  DegenerateMap,
  IterationCap,
  HeightIterationOverflow,
  InconsistentEnclosure,
  UnsupportedMap,
  Parse,
};

// Stable machine-readable identifier, e.g. "factorization-timeout".
std::string_view error_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  std::string_view code() const { return error_code(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace adelic

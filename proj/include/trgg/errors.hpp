#pragma once

#include <stdexcept>
#include <string>

namespace trgg {

// Bad experiment/CLI configuration (unknown field, wrong type, out-of-range
// value). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally impossible request: an edge budget that exceeds its pool, a
// constraint set with no admissible distribution. The CLI maps this to exit
// code 3.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trgg

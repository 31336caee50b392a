#pragma once

#include <stdexcept>
#include <string>

namespace presslab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A symbolic operation tried to read past the stored prefix of a point
// that has no tail rule.
struct DepthUnderflow : Error {
  explicit DepthUnderflow(const std::string& what) : Error(what) {}
};

// Invalid declarative input (system/potential/sample/run configuration).
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Checked integer arithmetic left the representable range.
struct OverflowError : Error {
  explicit OverflowError(const std::string& what) : Error(what) {}
};

}  // namespace presslab

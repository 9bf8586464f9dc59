#pragma once

#include <stdexcept>
#include <string>

namespace levylab {

/// Invalid input: out-of-range parameter, malformed spec, unknown variant.
/// `path` names the offending field (JSON pointer style) when known.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what, std::string path = {})
      : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A numeric routine could not reach its tolerance within its budget.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few usable Psi points to fit a decay exponent.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levylab

#pragma once

#include <stdexcept>
#include <string>

namespace otcc {

enum class ErrorKind {
  kInvalidArgument,
  kDegenerateDensity,
  kDegenerateConfiguration,
  kNumericalBlowup,
  kUnsupportedDimension,
  kAscentFailure,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` discriminates the cause.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace otcc

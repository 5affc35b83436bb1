#include "otcc/error.hpp"

namespace otcc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kDegenerateDensity: return "degenerate density";
    case ErrorKind::kDegenerateConfiguration: return "degenerate configuration";
    case ErrorKind::kNumericalBlowup: return "numerical blowup";
    case ErrorKind::kUnsupportedDimension: return "unsupported dimension";
    case ErrorKind::kAscentFailure: return "ascent failure";
  }
  return "error";
}

}  // namespace otcc

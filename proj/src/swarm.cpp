#include "otcc/swarm.hpp"

#include <cmath>
#include <string>

#include "otcc/error.hpp"

namespace otcc {

SwarmState::SwarmState(std::size_t d, std::vector<double> pos, std::vector<double> w, double t)
    : dim(d), positions(std::move(pos)), weights(std::move(w)), time(t) {
  if (dim == 0) throw Error(ErrorKind::kInvalidArgument, "dimension must be positive");
  if (weights.empty()) weights.assign(positions.size() / dim, 0.0);
}

void SwarmState::validate() const {
  if (dim == 0 || positions.size() % dim != 0) {
    throw Error(ErrorKind::kInvalidArgument, "positions length is not a multiple of the dimension");
  }
  const std::size_t n = positions.size() / dim;
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "swarm has no robots");
  if (weights.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "weights length " + std::to_string(weights.size()) +
                                                 " does not match " + std::to_string(n) + " robots");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = positions[i * dim + k] - positions[j * dim + k];
        sq += d * d;
      }
      if (std::sqrt(sq) <= 1e-12) {
        throw Error(ErrorKind::kDegenerateConfiguration,
                    "robots " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

}  // namespace otcc

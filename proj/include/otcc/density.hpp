#pragma once

#include <span>
#include <variant>
#include <vector>

#include "otcc/grid.hpp"

namespace otcc {

/// Axis-aligned normal distribution, diagonal covariance.
struct Gaussian {
  std::vector<double> mean;
  std::vector<double> variance;
};

struct Mixture {
  std::vector<double> weights;
  std::vector<Gaussian> components;
};

/// Uniform on a box (which may differ from the workspace).
struct Uniform {
  Workspace box;
};

/// Target density. Evaluation is the untruncated pdf on R^d.
class Density {
 public:
  using Variant = std::variant<Gaussian, Mixture, Uniform>;

  explicit Density(Variant v);

  static Density gaussian(std::vector<double> mean, std::vector<double> variance);
  static Density uniform(std::vector<double> lower, std::vector<double> upper);
  static Density mixture(std::vector<double> weights, std::vector<Gaussian> components);

  std::size_t dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return v_; }

  double eval(std::span<const double> point) const;
  double eval(double x) const { return eval(std::span<const double>(&x, 1)); }

  /// CDF along the single axis; requires dim() == 1.
  double cdf_1d(double x) const;

 private:
  Variant v_;
  std::size_t dim_ = 0;
};

/// Target density integrated onto a grid and renormalized to unit mass over
/// the workspace (midpoint rule).
struct GridDensity {
  const Grid* grid = nullptr;
  std::vector<double> cell_mass;
  /// Midpoint-rule integral of the raw density over the workspace. The
  /// truncated, renormalized pdf is `density.eval(y) / normalizer`.
  double normalizer = 1.0;

  double max_cell_mass() const;
};

/// Midpoint-rule discretization. Deterministic regardless of thread count.
GridDensity discretize(const Density& density, const Grid& grid);

}  // namespace otcc

#include "otcc/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "otcc/error.hpp"

namespace otcc {
namespace {

void check_gaussian(const Gaussian& g) {
  if (g.mean.empty() || g.mean.size() != g.variance.size()) {
    throw Error(ErrorKind::kInvalidArgument, "gaussian mean and variance lengths differ");
  }
  for (double v : g.variance) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidArgument, "gaussian variance must be positive");
    }
  }
}

double gaussian_pdf(const Gaussian& g, std::span<const double> p) {
  double exponent = 0.0;
  double norm = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - g.mean[k];
    exponent += d * d / g.variance[k];
    norm *= 2.0 * std::numbers::pi * g.variance[k];
  }
  return std::exp(-0.5 * exponent) / std::sqrt(norm);
}

double gaussian_cdf(const Gaussian& g, double x) {
  return 0.5 * std::erfc(-(x - g.mean[0]) / std::sqrt(2.0 * g.variance[0]));
}

}  // namespace

Density::Density(Variant v) : v_(std::move(v)) {
  if (const auto* g = std::get_if<Gaussian>(&v_)) {
    check_gaussian(*g);
    dim_ = g->mean.size();
  } else if (const auto* m = std::get_if<Mixture>(&v_)) {
    if (m->components.empty() || m->components.size() != m->weights.size()) {
      throw Error(ErrorKind::kInvalidArgument, "mixture needs one weight per component");
    }
    double total = 0.0;
    for (double w : m->weights) {
      if (!(w > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mixture weights must be positive");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorKind::kInvalidArgument, "mixture weights must sum to 1");
    }
    dim_ = m->components.front().mean.size();
    for (const auto& g : m->components) {
      check_gaussian(g);
      if (g.mean.size() != dim_) {
        throw Error(ErrorKind::kInvalidArgument, "mixture components differ in dimension");
      }
    }
  } else {
    const auto& u = std::get<Uniform>(v_);
    if (u.box.lower.size() != u.box.upper.size() || u.box.lower.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "uniform box bounds have different lengths");
    }
    for (std::size_t k = 0; k < u.box.dim(); ++k) {
      if (!(u.box.lower[k] < u.box.upper[k])) {
        throw Error(ErrorKind::kInvalidArgument, "uniform box needs lower < upper");
      }
    }
    dim_ = u.box.dim();
  }
}

Density Density::gaussian(std::vector<double> mean, std::vector<double> variance) {
  return Density(Gaussian{std::move(mean), std::move(variance)});
}

Density Density::uniform(std::vector<double> lower, std::vector<double> upper) {
  return Density(Uniform{Workspace{std::move(lower), std::move(upper)}});
}

Density Density::mixture(std::vector<double> weights, std::vector<Gaussian> components) {
  return Density(Mixture{std::move(weights), std::move(components)});
}

double Density::eval(std::span<const double> point) const {
  if (point.size() != dim_) {
    throw Error(ErrorKind::kInvalidArgument, "point has dimension " + std::to_string(point.size()) +
                                                 ", density has " + std::to_string(dim_));
  }
  if (const auto* g = std::get_if<Gaussian>(&v_)) return gaussian_pdf(*g, point);
  if (const auto* m = std::get_if<Mixture>(&v_)) {
    double value = 0.0;
    for (std::size_t c = 0; c < m->components.size(); ++c) {
      value += m->weights[c] * gaussian_pdf(m->components[c], point);
    }
    return value;
  }
  const auto& box = std::get<Uniform>(v_).box;
  double volume = 1.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    if (point[k] < box.lower[k] || point[k] > box.upper[k]) return 0.0;
    volume *= box.upper[k] - box.lower[k];
  }
  return 1.0 / volume;
}

double Density::cdf_1d(double x) const {
  if (dim_ != 1) throw Error(ErrorKind::kUnsupportedDimension, "cdf_1d needs a 1D density");
  if (const auto* g = std::get_if<Gaussian>(&v_)) return gaussian_cdf(*g, x);
  if (const auto* m = std::get_if<Mixture>(&v_)) {
    double value = 0.0;
    for (std::size_t c = 0; c < m->components.size(); ++c) {
      value += m->weights[c] * gaussian_cdf(m->components[c], x);
    }
    return value;
  }
  const auto& box = std::get<Uniform>(v_).box;
  return std::clamp((x - box.lower[0]) / (box.upper[0] - box.lower[0]), 0.0, 1.0);
}

double GridDensity::max_cell_mass() const {
  return cell_mass.empty() ? 0.0 : *std::max_element(cell_mass.begin(), cell_mass.end());
}

GridDensity discretize(const Density& density, const Grid& grid) {
  if (density.dim() != grid.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "density and grid dimensions differ");
  }
  const std::size_t cells = grid.num_cells();
  GridDensity out;
  out.grid = &grid;
  out.cell_mass.resize(cells);

  const double volume = grid.cell_volume();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells); ++c) {
    out.cell_mass[c] = density.eval(grid.center(static_cast<std::size_t>(c))) * volume;
  }

  double total = 0.0;
  for (double m : out.cell_mass) total += m;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorKind::kDegenerateDensity, "density has no mass on the workspace grid");
  }
  for (double& m : out.cell_mass) m /= total;
  out.normalizer = total;
  return out;
}

}  // namespace otcc

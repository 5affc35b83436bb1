#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "otcc/control.hpp"
#include "otcc/density.hpp"
#include "otcc/grid.hpp"
#include "otcc/simulate.hpp"

namespace otcc {

/// Raised for malformed or invalid experiment configurations; `field()` is the
/// dotted path of the offending entry (empty for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct LatticeSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> counts;
};

/// Fully resolved experiment description; every default is filled in.
struct ExperimentConfig {
  std::string name;
  std::size_t dimension = 1;
  Workspace workspace;
  std::vector<std::size_t> cells_per_axis;
  nlohmann::ordered_json density_spec;
  ControllerParams controller;
  SimConfig simulation;  // initial positions and weights included
  std::optional<LatticeSpec> lattice;
  std::string output_dir;

  Density make_density() const;
  Grid make_grid() const;
  std::size_t robots() const { return simulation.initial_positions.size() / dimension; }
  nlohmann::ordered_json to_json() const;
};

/// Points spanning the box inclusively, axis 0 fastest.
std::vector<double> lattice_positions(const LatticeSpec& lattice);

/// Validates and fills defaults. `output_override` replaces output_dir; when
/// the config has none, OTCC_OUT_DIR/<name> and then out/<name> are used.
ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::optional<std::string>& output_override = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::optional<std::string>& output_override = std::nullopt);

}  // namespace otcc

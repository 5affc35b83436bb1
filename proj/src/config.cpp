#include "otcc/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "otcc/error.hpp"

namespace otcc {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& node, const std::string& path, std::set<std::string> allowed) {
  for (const auto& item : node.items()) {
    if (!allowed.count(item.key())) throw ConfigError(join(path, item.key()), "unknown key");
  }
}

double get_number(const json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError(path, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

std::vector<double> get_vector(const json& node, const std::string& path, std::size_t length) {
  if (!node.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (node.size() != length) {
    throw ConfigError(path, "expected " + std::to_string(length) + " values, got " +
                                std::to_string(node.size()));
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < node.size(); ++k) {
    out.push_back(get_number(node[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::size_t get_count(const json& node, const std::string& path) {
  if (!node.is_number_integer() || node.get<long long>() <= 0) {
    throw ConfigError(path, "expected a positive integer");
  }
  return node.get<std::size_t>();
}

std::vector<double> positive(std::vector<double> v, const std::string& path) {
  for (double x : v) {
    if (!(x > 0.0)) throw ConfigError(path, "values must be positive");
  }
  return v;
}

ordered_json parse_gaussian(const json& node, const std::string& path, std::size_t dim,
                            bool with_weight) {
  require_object(node, path);
  if (with_weight) {
    reject_unknown(node, path, {"weight", "mean", "variance"});
  } else {
    reject_unknown(node, path, {"type", "mean", "variance"});
  }
  for (const char* key : {"mean", "variance"}) {
    if (!node.contains(key)) throw ConfigError(join(path, key), "missing");
  }
  ordered_json out;
  if (!with_weight) out["type"] = "gaussian";
  if (with_weight) {
    if (!node.contains("weight")) throw ConfigError(join(path, "weight"), "missing");
    const double w = get_number(node["weight"], join(path, "weight"));
    if (!(w > 0.0)) throw ConfigError(join(path, "weight"), "must be positive");
    out["weight"] = w;
  }
  out["mean"] = get_vector(node["mean"], join(path, "mean"), dim);
  out["variance"] = positive(get_vector(node["variance"], join(path, "variance"), dim),
                             join(path, "variance"));
  return out;
}

ordered_json parse_density(const json& node, std::size_t dim) {
  const std::string path = "density";
  require_object(node, path);
  if (!node.contains("type") || !node["type"].is_string()) {
    throw ConfigError("density.type", "expected one of gaussian, mixture, uniform");
  }
  const std::string type = node["type"];
  if (type == "gaussian") return parse_gaussian(node, path, dim, false);
  if (type == "uniform") {
    reject_unknown(node, path, {"type", "lower", "upper"});
    for (const char* key : {"lower", "upper"}) {
      if (!node.contains(key)) throw ConfigError(join(path, key), "missing");
    }
    ordered_json out;
    out["type"] = "uniform";
    out["lower"] = get_vector(node["lower"], "density.lower", dim);
    out["upper"] = get_vector(node["upper"], "density.upper", dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(out["lower"][k].get<double>() < out["upper"][k].get<double>())) {
        throw ConfigError("density.upper", "must exceed density.lower on every axis");
      }
    }
    return out;
  }
  if (type == "mixture") {
    reject_unknown(node, path, {"type", "components"});
    if (!node.contains("components") || !node["components"].is_array() ||
        node["components"].empty()) {
      throw ConfigError("density.components", "expected a non-empty array");
    }
    ordered_json out;
    out["type"] = "mixture";
    out["components"] = ordered_json::array();
    double total = 0.0;
    for (std::size_t c = 0; c < node["components"].size(); ++c) {
      auto comp = parse_gaussian(node["components"][c],
                                 "density.components[" + std::to_string(c) + "]", dim, true);
      total += comp["weight"].get<double>();
      out["components"].push_back(std::move(comp));
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ConfigError("density.components", "weights must sum to 1");
    }
    return out;
  }
  throw ConfigError("density.type", "unknown density type '" + type + "'");
}

Density density_from_spec(const ordered_json& spec) {
  const std::string type = spec["type"];
  if (type == "gaussian") {
    return Density::gaussian(spec["mean"].get<std::vector<double>>(),
                             spec["variance"].get<std::vector<double>>());
  }
  if (type == "uniform") {
    return Density::uniform(spec["lower"].get<std::vector<double>>(),
                            spec["upper"].get<std::vector<double>>());
  }
  std::vector<double> weights;
  std::vector<Gaussian> comps;
  for (const auto& c : spec["components"]) {
    weights.push_back(c["weight"].get<double>());
    comps.push_back({c["mean"].get<std::vector<double>>(), c["variance"].get<std::vector<double>>()});
  }
  return Density::mixture(std::move(weights), std::move(comps));
}

}  // namespace

std::vector<double> lattice_positions(const LatticeSpec& lattice) {
  const std::size_t d = lattice.counts.size();
  std::size_t total = 1;
  for (std::size_t c : lattice.counts) total *= c;
  std::vector<double> out(total * d);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t count = lattice.counts[k];
      const std::size_t idx = rest % count;
      rest /= count;
      out[p * d + k] = count == 1 ? 0.5 * (lattice.lower[k] + lattice.upper[k])
                                  : lattice.lower[k] + (lattice.upper[k] - lattice.lower[k]) *
                                                           static_cast<double>(idx) /
                                                           static_cast<double>(count - 1);
    }
  }
  return out;
}

Density ExperimentConfig::make_density() const { return density_from_spec(density_spec); }

Grid ExperimentConfig::make_grid() const { return Grid(workspace, cells_per_axis); }

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["dimension"] = dimension;
  j["workspace"] = {{"lower", workspace.lower}, {"upper", workspace.upper}};
  j["grid"] = {{"cells_per_axis", cells_per_axis}};
  j["density"] = density_spec;
  j["controller"] = {{"law", std::string(to_string(controller.law))},
                     {"k", controller.k},
                     {"k_prime", controller.k_prime}};
  j["simulation"] = {{"dt", simulation.dt},
                     {"max_time", simulation.max_time},
                     {"record_every", simulation.record_every},
                     {"steady_u_tol", simulation.steady_u_tol},
                     {"steady_phi_tol", simulation.steady_phi_tol},
                     {"probe_monotonicity", simulation.probe_monotonicity}};
  ordered_json initial;
  if (lattice) {
    initial["lattice"] = {{"lower", lattice->lower}, {"upper", lattice->upper}, {"counts", lattice->counts}};
  } else {
    ordered_json pts = ordered_json::array();
    for (std::size_t i = 0; i < robots(); ++i) {
      pts.push_back(std::vector<double>(simulation.initial_positions.begin() + i * dimension,
                                        simulation.initial_positions.begin() + (i + 1) * dimension));
    }
    initial["positions"] = pts;
  }
  initial["weights"] = simulation.initial_weights;
  j["initial"] = initial;
  j["output_dir"] = output_dir;
  return j;
}

ExperimentConfig parse_config(const json& doc, const std::optional<std::string>& output_override) {
  require_object(doc, "");
  reject_unknown(doc, "", {"name", "dimension", "workspace", "grid", "density", "controller",
                           "simulation", "initial", "output_dir"});
  ExperimentConfig cfg;

  cfg.name = "experiment";
  if (doc.contains("name")) {
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
      throw ConfigError("name", "expected a non-empty string");
    }
    cfg.name = doc["name"];
  }

  if (!doc.contains("dimension")) throw ConfigError("dimension", "missing");
  if (!doc["dimension"].is_number_integer() ||
      (doc["dimension"].get<long long>() != 1 && doc["dimension"].get<long long>() != 2)) {
    throw ConfigError("dimension", "must be 1 or 2");
  }
  const std::size_t d = doc["dimension"];
  cfg.dimension = d;

  cfg.workspace = Workspace{std::vector<double>(d, -10.0), std::vector<double>(d, 10.0)};
  if (doc.contains("workspace")) {
    const json& ws = doc["workspace"];
    require_object(ws, "workspace");
    reject_unknown(ws, "workspace", {"lower", "upper"});
    if (ws.contains("lower")) cfg.workspace.lower = get_vector(ws["lower"], "workspace.lower", d);
    if (ws.contains("upper")) cfg.workspace.upper = get_vector(ws["upper"], "workspace.upper", d);
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (!(cfg.workspace.lower[k] < cfg.workspace.upper[k])) {
      throw ConfigError("workspace", "lower must be below upper on every axis");
    }
  }

  cfg.cells_per_axis = d == 1 ? std::vector<std::size_t>{2000} : std::vector<std::size_t>{200, 200};
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    require_object(g, "grid");
    reject_unknown(g, "grid", {"cells_per_axis"});
    if (g.contains("cells_per_axis")) {
      const json& c = g["cells_per_axis"];
      if (!c.is_array() || c.size() != d) {
        throw ConfigError("grid.cells_per_axis", "expected " + std::to_string(d) + " positive integers");
      }
      for (std::size_t k = 0; k < d; ++k) {
        cfg.cells_per_axis[k] = get_count(c[k], "grid.cells_per_axis[" + std::to_string(k) + "]");
      }
    }
  }

  if (!doc.contains("density")) throw ConfigError("density", "missing");
  cfg.density_spec = parse_density(doc["density"], d);

  if (doc.contains("controller")) {
    const json& c = doc["controller"];
    require_object(c, "controller");
    reject_unknown(c, "controller", {"law", "k", "k_prime"});
    if (c.contains("law")) {
      if (!c["law"].is_string()) throw ConfigError("controller.law", "expected vtcc or otcc");
      try {
        cfg.controller.law = parse_law(c["law"].get<std::string>());
      } catch (const Error&) {
        throw ConfigError("controller.law",
                          "unknown law '" + c["law"].get<std::string>() + "' (expected vtcc or otcc)");
      }
    }
    if (c.contains("k")) cfg.controller.k = get_number(c["k"], "controller.k");
    if (c.contains("k_prime")) cfg.controller.k_prime = get_number(c["k_prime"], "controller.k_prime");
  }
  if (!(cfg.controller.k > 0.0)) throw ConfigError("controller.k", "must be positive");
  if (!(cfg.controller.k_prime >= 0.0)) throw ConfigError("controller.k_prime", "must be non-negative");

  // Initial placement first: the default steady tolerances depend on n.
  if (!doc.contains("initial")) throw ConfigError("initial", "missing");
  const json& init = doc["initial"];
  require_object(init, "initial");
  reject_unknown(init, "initial", {"lattice", "positions", "weights"});
  if (init.contains("lattice") == init.contains("positions")) {
    throw ConfigError("initial", "give exactly one of lattice or positions");
  }
  if (init.contains("lattice")) {
    const json& l = init["lattice"];
    require_object(l, "initial.lattice");
    reject_unknown(l, "initial.lattice", {"lower", "upper", "counts"});
    for (const char* key : {"lower", "upper", "counts"}) {
      if (!l.contains(key)) throw ConfigError(join("initial.lattice", key), "missing");
    }
    LatticeSpec spec;
    spec.lower = get_vector(l["lower"], "initial.lattice.lower", d);
    spec.upper = get_vector(l["upper"], "initial.lattice.upper", d);
    if (!l["counts"].is_array() || l["counts"].size() != d) {
      throw ConfigError("initial.lattice.counts", "expected " + std::to_string(d) + " positive integers");
    }
    for (std::size_t k = 0; k < d; ++k) {
      spec.counts.push_back(get_count(l["counts"][k], "initial.lattice.counts[" + std::to_string(k) + "]"));
      if (spec.counts[k] > 1 && !(spec.lower[k] < spec.upper[k])) {
        throw ConfigError("initial.lattice", "lower must be below upper on every axis");
      }
    }
    cfg.simulation.initial_positions = lattice_positions(spec);
    cfg.lattice = spec;
  } else {
    const json& pts = init["positions"];
    if (!pts.is_array() || pts.empty()) throw ConfigError("initial.positions", "expected a non-empty array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto p = get_vector(pts[i], "initial.positions[" + std::to_string(i) + "]", d);
      cfg.simulation.initial_positions.insert(cfg.simulation.initial_positions.end(), p.begin(), p.end());
    }
  }
  const std::size_t n = cfg.robots();
  cfg.simulation.initial_weights.assign(n, 0.0);
  if (init.contains("weights")) {
    cfg.simulation.initial_weights = get_vector(init["weights"], "initial.weights", n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!cfg.workspace.contains({cfg.simulation.initial_positions.data() + i * d, d})) {
      throw ConfigError("initial", "robot " + std::to_string(i) + " starts outside the workspace");
    }
  }
  try {
    SwarmState(d, cfg.simulation.initial_positions, cfg.simulation.initial_weights).validate();
  } catch (const Error& e) {
    throw ConfigError("initial", e.what());
  }

  SimConfig& sim = cfg.simulation;
  sim.dt = 0.1;
  sim.max_time = d == 1 ? 5000.0 : 500.0;
  sim.record_every = 100;
  sim.steady_u_tol = 1e-4 * cfg.controller.k * cfg.workspace.diameter();
  // With k' = 0 the weights never move and any positive tolerance is inert.
  sim.steady_phi_tol = cfg.controller.k_prime > 0.0
                           ? 1e-3 * cfg.controller.k_prime / static_cast<double>(n)
                           : 1e-12;
  sim.probe_monotonicity = true;
  if (doc.contains("simulation")) {
    const json& s = doc["simulation"];
    require_object(s, "simulation");
    reject_unknown(s, "simulation", {"dt", "max_time", "record_every", "steady_u_tol",
                                     "steady_phi_tol", "probe_monotonicity"});
    if (s.contains("dt")) sim.dt = get_number(s["dt"], "simulation.dt");
    if (s.contains("max_time")) sim.max_time = get_number(s["max_time"], "simulation.max_time");
    if (s.contains("record_every")) sim.record_every = get_count(s["record_every"], "simulation.record_every");
    if (s.contains("steady_u_tol")) sim.steady_u_tol = get_number(s["steady_u_tol"], "simulation.steady_u_tol");
    if (s.contains("steady_phi_tol")) {
      sim.steady_phi_tol = get_number(s["steady_phi_tol"], "simulation.steady_phi_tol");
    }
    if (s.contains("probe_monotonicity")) {
      if (!s["probe_monotonicity"].is_boolean()) {
        throw ConfigError("simulation.probe_monotonicity", "expected true or false");
      }
      sim.probe_monotonicity = s["probe_monotonicity"];
    }
  }
  if (!(sim.dt > 0.0)) throw ConfigError("simulation.dt", "must be positive");
  if (!(sim.max_time > 0.0)) throw ConfigError("simulation.max_time", "must be positive");
  if (sim.max_time < sim.dt) throw ConfigError("simulation.max_time", "shorter than one time step");
  if (!(sim.steady_u_tol > 0.0)) throw ConfigError("simulation.steady_u_tol", "must be positive");
  if (!(sim.steady_phi_tol > 0.0)) throw ConfigError("simulation.steady_phi_tol", "must be positive");
  if (!(sim.dt * cfg.controller.k < 1.0)) throw ConfigError("simulation.dt", "dt * k must be below 1");

  if (output_override) {
    cfg.output_dir = *output_override;
  } else if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty()) {
      throw ConfigError("output_dir", "expected a non-empty string");
    }
    cfg.output_dir = doc["output_dir"];
  } else if (const char* root = std::getenv("OTCC_OUT_DIR"); root && *root) {
    cfg.output_dir = (std::filesystem::path(root) / cfg.name).string();
  } else {
    cfg.output_dir = (std::filesystem::path("out") / cfg.name).string();
  }

  try {
    Density density = cfg.make_density();
    (void)density;
  } catch (const Error& e) {
    throw ConfigError("density", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::optional<std::string>& output_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
  return parse_config(doc, output_override);
}

}  // namespace otcc

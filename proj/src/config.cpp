#include "frost/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "frost/io.hpp"

namespace frost {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("config: " + msg); }

/// Wraps one JSON object and hands out typed members, recording which keys
/// were consumed so leftovers can be rejected.
class Section {
public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) fail(name_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(name_ + "." + key + " has the wrong type");
    }
  }

  bool has(const char* key) {
    if (j_.contains(key)) {
      seen_.insert(key);
      return true;
    }
    return false;
  }

  const json& at(const char* key) { return j_.at(key); }

  void finish() {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (!seen_.count(key)) fail("unknown key " + name_ + "." + key);
    }
  }

private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

void parse_geometry(const json& j, CaseGeometry& g) {
  Section s(j, "geometry");
  s.get("cabinet_width", g.cabinet_width);
  s.get("cabinet_height", g.cabinet_height);
  s.get("food_width", g.food_width);
  s.get("food_height", g.food_height);
  s.get("shelf_width", g.shelf_width);
  s.get("shelf_thickness", g.shelf_thickness);
  s.get("inlet_height", g.inlet_height);
  s.get("outlet_height", g.outlet_height);
  s.get("shelf_y", g.shelf_y);
  s.get("shelf_x0", g.shelf_x0);
  if (s.has("food_anchor")) {
    const auto& a = s.at("food_anchor");
    if (!a.is_array() || a.size() != 2) fail("geometry.food_anchor must be [x, y]");
    g.food_anchor = {a[0].get<double>(), a[1].get<double>()};
  }
  if (s.has("duct_wall")) {
    const std::string w = s.at("duct_wall").get<std::string>();
    if (w == "left")
      g.duct_wall = DuctWall::Left;
    else if (w == "right")
      g.duct_wall = DuctWall::Right;
    else
      fail("geometry.duct_wall must be \"left\" or \"right\"");
  }
  s.finish();
}

void parse_solver(const json& j, SolverOptions& o) {
  Section s(j, "solver");
  s.get("dt", o.dt);
  s.get("t_final", o.t_final);
  s.get("snapshot_stride", o.snapshot_stride);
  s.get("chi", o.chi);
  s.get("picard_tol", o.picard_tol);
  s.get("picard_max_iters", o.picard_max_iters);
  s.get("linear_tol", o.linear_tol);
  s.get("linear_max_iters", o.linear_max_iters);
  s.get("rho_c_floor", o.rho_c_floor);
  s.get("property_smoothing", o.property_smoothing);
  s.get("wall_lambda", o.wall_lambda);
  s.get("wall_thickness", o.wall_thickness);
  s.get("shelf_conducting", o.shelf_conducting);
  s.finish();
}

}  // namespace

void PipelineConfig::validate() const {
  geometry.validate();
  if (nx < 4 || ny < 4) fail("grid must be at least 4x4");
  if (solver.dt <= 0) fail("solver.dt must be positive");
  if (solver.t_final < solver.dt) fail("solver.t_final must cover at least one step");
  if (solver.snapshot_stride < 1) fail("solver.snapshot_stride must be >= 1");
  if (solver.picard_max_iters < 1 || solver.linear_max_iters < 1)
    fail("iteration limits must be >= 1");
  if (solver.picard_tol <= 0 || solver.linear_tol <= 0) fail("tolerances must be positive");
  if (solver.property_smoothing < 0) fail("solver.property_smoothing must be non-negative");
  if (sample_count < 1) fail("sampling.count must be >= 1");
  if (train_count < 1 || train_count > sample_count)
    fail("sampling.train must lie in [1, sampling.count]");
  if (n_max < 1) fail("rom.n_max must be >= 1");
  if (pixel_size <= 0) fail("sensors.pixel_size must be positive");
  if (rom_dimension < 0) fail("estimation.dimension must be \"auto\" or a positive integer");
  if (noise_sd < 0) fail("estimation.noise_sd must be non-negative");
  for (const auto& p : points)
    if (p.x < 0 || p.x > geometry.cabinet_width || p.y < 0 || p.y > geometry.cabinet_height)
      fail("points must lie inside the cabinet");
}

PipelineConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }

  PipelineConfig cfg;
  Section top(j, "config");
  if (top.has("geometry")) parse_geometry(top.at("geometry"), cfg.geometry);
  if (top.has("grid")) {
    Section s(top.at("grid"), "grid");
    s.get("nx", cfg.nx);
    s.get("ny", cfg.ny);
    s.finish();
  }
  if (top.has("solver")) parse_solver(top.at("solver"), cfg.solver);
  if (top.has("sampling")) {
    Section s(top.at("sampling"), "sampling");
    s.get("count", cfg.sample_count);
    s.get("train", cfg.train_count);
    s.get("seed", cfg.seed);
    s.finish();
  }
  if (top.has("rom")) {
    Section s(top.at("rom"), "rom");
    s.get("n_max", cfg.n_max);
    s.get("subtract_mean", cfg.subtract_mean);
    s.get("area_weighted", cfg.area_weighted);
    s.finish();
  }
  if (top.has("sensors")) {
    Section s(top.at("sensors"), "sensors");
    s.get("pixel_size", cfg.pixel_size);
    s.get("exclude_food", cfg.exclude_food);
    if (s.has("mode")) {
      const std::string m = s.at("mode").get<std::string>();
      if (m == "unit_norm")
        cfg.sensor_mode = SensorMode::UnitNorm;
      else if (m == "average")
        cfg.sensor_mode = SensorMode::Average;
      else
        fail("sensors.mode must be \"unit_norm\" or \"average\"");
    }
    s.finish();
  }
  if (top.has("estimation")) {
    Section s(top.at("estimation"), "estimation");
    if (s.has("dimension")) {
      const auto& d = s.at("dimension");
      if (d.is_string() && d.get<std::string>() == "auto")
        cfg.rom_dimension = 0;
      else if (d.is_number_integer())
        cfg.rom_dimension = d.get<int>();
      else
        fail("estimation.dimension must be \"auto\" or an integer");
    }
    s.get("noise_sd", cfg.noise_sd);
    s.get("noise_seed", cfg.noise_seed);
    s.finish();
  }
  if (top.has("points")) {
    const auto& arr = top.at("points");
    if (!arr.is_array()) fail("points must be an array of [x, y] pairs");
    cfg.points.clear();
    for (const auto& p : arr) {
      if (!p.is_array() || p.size() != 2) fail("points must be an array of [x, y] pairs");
      cfg.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  top.finish();

  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

std::string canonical_config_json(const PipelineConfig& c) {
  ordered_json j;
  j["geometry"] = {
      {"cabinet_width", c.geometry.cabinet_width},
      {"cabinet_height", c.geometry.cabinet_height},
      {"food_width", c.geometry.food_width},
      {"food_height", c.geometry.food_height},
      {"shelf_width", c.geometry.shelf_width},
      {"shelf_thickness", c.geometry.shelf_thickness},
      {"inlet_height", c.geometry.inlet_height},
      {"outlet_height", c.geometry.outlet_height},
      {"food_anchor", {c.geometry.food_anchor.x, c.geometry.food_anchor.y}},
      {"shelf_y", c.geometry.shelf_y},
      {"shelf_x0", c.geometry.shelf_x0},
      {"duct_wall", c.geometry.duct_wall == DuctWall::Left ? "left" : "right"},
  };
  j["grid"] = {{"nx", c.nx}, {"ny", c.ny}};
  j["solver"] = {
      {"dt", c.solver.dt},
      {"t_final", c.solver.t_final},
      {"snapshot_stride", c.solver.snapshot_stride},
      {"chi", c.solver.chi},
      {"picard_tol", c.solver.picard_tol},
      {"picard_max_iters", c.solver.picard_max_iters},
      {"linear_tol", c.solver.linear_tol},
      {"linear_max_iters", c.solver.linear_max_iters},
      {"rho_c_floor", c.solver.rho_c_floor},
      {"property_smoothing", c.solver.property_smoothing},
      {"wall_lambda", c.solver.wall_lambda},
      {"wall_thickness", c.solver.wall_thickness},
      {"shelf_conducting", c.solver.shelf_conducting},
  };
  j["sampling"] = {{"count", c.sample_count}, {"train", c.train_count}, {"seed", c.seed}};
  j["rom"] = {{"n_max", c.n_max},
              {"subtract_mean", c.subtract_mean},
              {"area_weighted", c.area_weighted}};
  j["sensors"] = {{"pixel_size", c.pixel_size},
                  {"mode", c.sensor_mode == SensorMode::UnitNorm ? "unit_norm" : "average"},
                  {"exclude_food", c.exclude_food}};
  if (c.rom_dimension == 0)
    j["estimation"] = {{"dimension", "auto"}};
  else
    j["estimation"] = {{"dimension", c.rom_dimension}};
  j["estimation"]["noise_sd"] = c.noise_sd;
  j["estimation"]["noise_seed"] = c.noise_seed;
  j["points"] = ordered_json::array();
  for (const auto& p : c.points) j["points"].push_back({p.x, p.y});
  return j.dump(2) + "\n";
}

Hash256 config_hash(const PipelineConfig& config) {
  const std::string text = canonical_config_json(config);
  Hasher h;
  h.update_str(text);
  return h.digest();
}

double snapshot_scale(const PipelineConfig& config, const StructuredGrid& grid) {
  return config.area_weighted ? std::sqrt(grid.cell_area(0)) : 1.0;
}

}  // namespace frost

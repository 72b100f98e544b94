#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frost/geometry.hpp"
#include "frost/hash.hpp"
#include "frost/observation.hpp"
#include "frost/solver.hpp"

namespace frost {

/// Everything one end-to-end pipeline invocation depends on. Defaults are
/// the desk-scale case; a JSON file overrides individual keys per section.
struct PipelineConfig {
  CaseGeometry geometry;
  int nx = 70;
  int ny = 80;
  SolverOptions solver;

  // Parameter sampling: `count` draws from one seed, the first `train`
  // feeding the basis and the rest held out for evaluation.
  int sample_count = 10;
  int train_count = 8;
  std::uint64_t seed = 2024;

  int n_max = 80;
  bool subtract_mean = false;
  bool area_weighted = false;  // scales snapshots by sqrt(cell area)

  double pixel_size = 0.02;
  SensorMode sensor_mode = SensorMode::UnitNorm;
  bool exclude_food = false;  // drop pixels that touch food cells

  int rom_dimension = 0;  // 0 selects the dimension from the bound curve
  double noise_sd = 0.0;
  std::uint64_t noise_seed = 7;

  std::vector<Vec2> points{{0.18, 0.22}, {0.2175, 0.2325}, {0.18, 0.30}};

  void validate() const;
};

/// Parses a JSON override document on top of the defaults. Unknown keys are
/// rejected so typos fail loudly. The text "{}" yields the defaults.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

/// Fully resolved configuration as JSON with a fixed key order, suitable for
/// hashing and for echoing next to outputs.
std::string canonical_config_json(const PipelineConfig& config);

Hash256 config_hash(const PipelineConfig& config);

/// sqrt(dx * dy) when area weighting is on, otherwise 1. Uniform grids make
/// area weighting a single scale factor on the snapshot matrix.
double snapshot_scale(const PipelineConfig& config, const StructuredGrid& grid);

}  // namespace frost

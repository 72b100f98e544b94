#pragma once

#include <string>
#include <vector>

#include "frost/hash.hpp"
#include "frost/observation.hpp"
#include "frost/pod.hpp"
#include "frost/solver.hpp"

namespace frost {

/// Snapshot container, format FROST1: magic "FRST1", format version u16,
/// state length N u64, snapshot count u64, grid hash (32 bytes), then one
/// record per snapshot [time f64, u_in f64, t_cold f64, t_ext f64,
/// h_ext f64, N state f64s]. Everything little-endian. Measurement series
/// use the same container with N = sensor count.
void write_run(const std::string& path, const StoredRun& run);
StoredRun read_run(const std::string& path);

/// Basis container, format FROM1: magic "FROM1", format version u16, N u64,
/// n_max u64, sigma count u64, grid hash (32 bytes), mean flag u8,
/// total energy u64-pattern f64, then [mean field f64 x N when flagged],
/// sigma array, phi column-major f64 x (N * n_max). Little-endian.
void write_basis(const std::string& path, const PodBasis& basis);
PodBasis read_basis(const std::string& path);

/// Sensor layout: pixel rectangles, covered cells, mode, digests, and the
/// optional per-step placement objectives, as JSON.
struct SensorLayout {
  SensorMode mode = SensorMode::UnitNorm;
  double pixel_size = 0.0;
  Hash256 grid_digest{};
  Hash256 config_digest{};
  std::vector<PixelSensor> sensors;
  std::vector<double> objectives;  // placement audit trail, may be empty
};

void write_sensor_layout(const std::string& path, const SensorLayout& layout);
SensorLayout read_sensor_layout(const std::string& path);

/// Plot-data table: header row then one line per row vector, full double
/// round-trip precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace frost

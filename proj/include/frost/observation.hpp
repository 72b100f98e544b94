#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "frost/geometry.hpp"
#include "frost/hash.hpp"
#include "frost/kernels.hpp"

namespace frost {

enum class SensorMode { UnitNorm, Average };

/// One pixel-averaged sensor: a rectangle of whole grid cells with a weight
/// per covered cell. Weights are empty until assemble_observer fixes the
/// mode.
struct PixelSensor {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // covered rectangle, m
  int ti = 0, tj = 0;                             // tile coordinates in the pixel grid
  std::vector<int> cells;
  std::vector<double> weights;
};

/// Sparse column-wise observation operator: column s of W holds sensor s's
/// weights at its covered cells, zero elsewhere.
struct ObservationMatrix {
  SensorMode mode = SensorMode::UnitNorm;
  int rows = 0;  // N
  std::vector<PixelSensor> sensors;
  Hash256 grid_digest{};

  int count() const { return static_cast<int>(sensors.size()); }
};

/// Tiles the domain with pixel_size x pixel_size blocks of cells anchored at
/// the grid origin. pixel_size must be an integer multiple of both cell
/// dimensions (1e-9 relative slack). Far-edge tiles that the domain truncates
/// are kept as smaller pixels; a pixel that covers any cell rejected by
/// include_cell is dropped entirely. Pass a null predicate to keep all cells.
std::vector<PixelSensor> build_pixel_grid(const StructuredGrid& grid, double pixel_size,
                                          const std::function<bool(int)>& include_cell = {});

/// Number of origin-anchored tiles along one axis of length `cells` with
/// `per_tile` cells per full tile, counting the truncated far-edge tile.
inline int pixel_tiles(int cells, int per_tile) { return (cells + per_tile - 1) / per_tile; }

/// Fixes weights: unit-norm scales covered-cell areas to a unit l2 column,
/// average mode to a convex mean. Sensors must be non-empty and pairwise
/// disjoint (shared cells break the orthogonality contract and throw).
ObservationMatrix assemble_observer(const StructuredGrid& grid, std::vector<PixelSensor> sensors,
                                    SensorMode mode);

/// l = W^T T, plus i.i.d. Gaussian noise of the given standard deviation
/// when noise_sd > 0 (Box-Muller over a seeded mt19937_64, one draw pair per
/// sensor; platform-independent).
std::vector<double> measure(const ObservationMatrix& w, const Field& T, double noise_sd = 0.0,
                            std::uint64_t seed = 0);

}  // namespace frost

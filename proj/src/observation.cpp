#include "frost/observation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace frost {

namespace {

int cells_per_tile(double pixel_size, double h) {
  const double ratio = pixel_size / h;
  const int k = static_cast<int>(std::lround(ratio));
  if (k < 1 || std::abs(ratio - k) > 1e-9 * ratio) {
    throw std::invalid_argument("pixel size must be an integer multiple of the cell size");
  }
  return k;
}

}  // namespace

std::vector<PixelSensor> build_pixel_grid(const StructuredGrid& grid, double pixel_size,
                                          const std::function<bool(int)>& include_cell) {
  if (!(pixel_size > 0.0)) throw std::invalid_argument("pixel size must be positive");
  const int kx = cells_per_tile(pixel_size, grid.dx());
  const int ky = cells_per_tile(pixel_size, grid.dy());
  const int tiles_x = pixel_tiles(grid.nx, kx);
  const int tiles_y = pixel_tiles(grid.ny, ky);

  std::vector<PixelSensor> out;
  for (int tj = 0; tj < tiles_y; ++tj) {
    for (int ti = 0; ti < tiles_x; ++ti) {
      const int i0 = ti * kx, i1 = std::min((ti + 1) * kx, grid.nx);
      const int j0 = tj * ky, j1 = std::min((tj + 1) * ky, grid.ny);
      PixelSensor s;
      s.ti = ti;
      s.tj = tj;
      s.x0 = grid.x_faces[i0];
      s.x1 = grid.x_faces[i1];
      s.y0 = grid.y_faces[j0];
      s.y1 = grid.y_faces[j1];
      bool keep = true;
      for (int j = j0; j < j1 && keep; ++j) {
        for (int i = i0; i < i1 && keep; ++i) {
          const int c = grid.idx(i, j);
          if (include_cell && !include_cell(c)) {
            keep = false;  // pixels touching excluded cells are dropped whole
          } else {
            s.cells.push_back(c);
          }
        }
      }
      if (keep) out.push_back(std::move(s));
    }
  }
  return out;
}

ObservationMatrix assemble_observer(const StructuredGrid& grid, std::vector<PixelSensor> sensors,
                                    SensorMode mode) {
  if (sensors.empty()) throw std::invalid_argument("no sensors to assemble");

  ObservationMatrix w;
  w.mode = mode;
  w.rows = grid.cell_count();
  w.grid_digest = grid_hash(grid);

  std::vector<char> claimed(grid.cell_count(), 0);
  for (PixelSensor& s : sensors) {
    if (s.cells.empty()) throw std::invalid_argument("sensor covers no cells");
    double sum = 0.0, sum_sq = 0.0;
    s.weights.resize(s.cells.size());
    for (std::size_t k = 0; k < s.cells.size(); ++k) {
      const int c = s.cells[k];
      if (c < 0 || c >= grid.cell_count()) throw std::invalid_argument("sensor cell out of range");
      if (claimed[c]) {
        throw std::invalid_argument("overlapping sensors: cell " + std::to_string(c) +
                                    " is covered twice");
      }
      claimed[c] = 1;
      const double a = grid.cell_area(c);
      s.weights[k] = a;
      sum += a;
      sum_sq += a * a;
    }
    const double denom = mode == SensorMode::UnitNorm ? std::sqrt(sum_sq) : sum;
    for (double& v : s.weights) v /= denom;
  }
  w.sensors = std::move(sensors);
  return w;
}

std::vector<double> measure(const ObservationMatrix& w, const Field& T, double noise_sd,
                            std::uint64_t seed) {
  if (static_cast<int>(T.size()) != w.rows) {
    throw std::invalid_argument("field length does not match the observation operator");
  }
  std::vector<double> ell(w.sensors.size());
  for (std::size_t s = 0; s < w.sensors.size(); ++s) {
    const PixelSensor& px = w.sensors[s];
    double v = 0.0;
    for (std::size_t k = 0; k < px.cells.size(); ++k) v += px.weights[k] * T[px.cells[k]];
    ell[s] = v;
  }
  if (noise_sd > 0.0) {
    std::mt19937_64 eng(seed);
    for (double& v : ell) {
      // Explicit Box-Muller: the std distributions are implementation-defined.
      const double u1 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
      const double u2 = static_cast<double>(eng() >> 11) * 0x1.0p-53;
      const double mag = std::sqrt(-2.0 * std::log1p(-u1));
      v += noise_sd * mag * std::cos(6.283185307179586476925286766559 * u2);
    }
  }
  return ell;
}

}  // namespace frost

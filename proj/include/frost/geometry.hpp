#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frost/hash.hpp"

namespace frost {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class CellLabel : std::uint8_t { Fluid = 0, Food = 1, Shelf = 2 };

enum class DuctWall { Left, Right };

/// Cross-section of the freezer cabinet. All lengths in metres. The inlet
/// duct sits at the top of the duct wall, the outlet at its bottom; the
/// remaining segments of that wall are adiabatic.
struct CaseGeometry {
  double cabinet_width = 0.35;
  double cabinet_height = 0.40;
  double food_width = 0.08;
  double food_height = 0.03;
  double shelf_width = 0.25;
  double shelf_thickness = 0.002;
  double inlet_height = 0.12;
  double outlet_height = 0.06;
  Vec2 food_anchor{0.14, 0.202};  // lower-left corner of the food slab
  double shelf_y = 0.20;          // lower edge of the shelf
  double shelf_x0 = 0.05;         // left edge of the shelf
  DuctWall duct_wall = DuctWall::Left;

  /// Throws std::invalid_argument when a dimension is non-positive, a
  /// rectangle leaves the cabinet, the food does not rest on the shelf top,
  /// or inlet_height + outlet_height >= cabinet_height.
  void validate() const;
};

enum class Side : std::uint8_t { West = 0, East = 1, South = 2, North = 3 };

enum class BoundarySegment : std::uint8_t {
  Inlet,     // advective inflow at the cold-air temperature
  Outlet,    // advective outflow, zero-gradient
  RearWall,  // adiabatic segments of the duct wall
  RobinWall  // exterior walls with finite thermal resistance
};

struct BoundaryFace {
  int cell;
  Side side;
  BoundarySegment segment;
};

/// Uniform structured finite-volume grid over the cabinet with cell labels.
/// Cells are indexed row-major: cell(i, j) = j * nx + i.
struct StructuredGrid {
  int nx = 0;
  int ny = 0;
  std::vector<double> x_faces;  // nx + 1 ascending coordinates
  std::vector<double> y_faces;  // ny + 1
  std::vector<CellLabel> labels;
  std::vector<BoundaryFace> boundary;  // every outer face exactly once
  CaseGeometry snapped;                // geometry after face alignment
  int inlet_j_begin = 0, inlet_j_end = 0;    // duct rows [begin, end)
  int outlet_j_begin = 0, outlet_j_end = 0;

  int cell_count() const { return nx * ny; }
  int idx(int i, int j) const { return j * nx + i; }
  double dx() const { return x_faces[1] - x_faces[0]; }
  double dy() const { return y_faces[1] - y_faces[0]; }
  double cell_area(int) const { return dx() * dy(); }
  double cell_x(int i) const { return 0.5 * (x_faces[i] + x_faces[i + 1]); }
  double cell_y(int j) const { return 0.5 * (y_faces[j] + y_faces[j + 1]); }
  CellLabel label(int i, int j) const { return labels[idx(i, j)]; }
  bool is_solid(int cell) const { return labels[cell] != CellLabel::Fluid; }

  std::vector<int> cells_of(CellLabel l) const;
};

/// Builds the grid for `geometry` with nx-by-ny cells. Rectangle edges snap
/// to the nearest faces; a positive-thickness rectangle that collapses under
/// snapping is expanded to one cell, and the food slab is placed on the
/// snapped shelf top. The snapped geometry is recorded on the grid. Throws
/// std::invalid_argument when the food slab resolves to fewer than 2 cells
/// across either dimension or a rectangle leaves the cabinet.
StructuredGrid build_grid(const CaseGeometry& geometry, int nx, int ny);

/// Cell containing (x, y); points on a shared face resolve to the
/// lower-index cell. Throws std::out_of_range outside the cabinet.
int locate_point(const StructuredGrid& grid, double x, double y);

/// All-fluid rectangular grid with Robin walls on every side. Used by
/// verification problems and benchmarks that need a domain without solids.
StructuredGrid uniform_fluid_grid(int nx, int ny, double width, double height);

/// Digest of everything that defines the discrete domain: dimensions, face
/// coordinates, labels, and duct rows.
Hash256 grid_hash(const StructuredGrid& grid);

}  // namespace frost

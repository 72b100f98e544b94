#include "frost/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frost {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

int snap_face(double coord, double h) { return static_cast<int>(std::lround(coord / h)); }

struct CellRect {
  int i0, i1, j0, j1;  // half-open cell ranges
};

}  // namespace

void CaseGeometry::validate() const {
  require(cabinet_width > 0 && cabinet_height > 0, "cabinet dimensions must be positive");
  require(food_width > 0 && food_height > 0, "food dimensions must be positive");
  require(shelf_width > 0 && shelf_thickness > 0, "shelf dimensions must be positive");
  require(inlet_height > 0 && outlet_height > 0, "duct heights must be positive");
  require(inlet_height + outlet_height < cabinet_height,
          "inlet_height + outlet_height must be smaller than cabinet_height");

  const double fx1 = food_anchor.x + food_width;
  const double fy1 = food_anchor.y + food_height;
  require(food_anchor.x > 0 && food_anchor.y > 0 && fx1 < cabinet_width && fy1 < cabinet_height,
          "food slab must lie strictly inside the cabinet");

  const double sx1 = shelf_x0 + shelf_width;
  const double sy1 = shelf_y + shelf_thickness;
  require(shelf_x0 >= 0 && shelf_y > 0 && sx1 <= cabinet_width && sy1 < cabinet_height,
          "shelf must lie inside the cabinet");

  require(std::abs(food_anchor.y - sy1) <= 1e-12,
          "food slab must rest on the shelf top surface");
  require(food_anchor.x >= shelf_x0 - 1e-12 && fx1 <= sx1 + 1e-12,
          "food slab must sit within the shelf span");
}

std::vector<int> StructuredGrid::cells_of(CellLabel l) const {
  std::vector<int> out;
  for (int c = 0; c < cell_count(); ++c)
    if (labels[c] == l) out.push_back(c);
  return out;
}

StructuredGrid build_grid(const CaseGeometry& geometry, int nx, int ny) {
  geometry.validate();
  require(nx >= 8 && ny >= 8, "grid must be at least 8x8 cells");

  StructuredGrid g;
  g.nx = nx;
  g.ny = ny;
  const double dx = geometry.cabinet_width / nx;
  const double dy = geometry.cabinet_height / ny;
  g.x_faces.resize(nx + 1);
  g.y_faces.resize(ny + 1);
  for (int i = 0; i <= nx; ++i) g.x_faces[i] = (i == nx) ? geometry.cabinet_width : i * dx;
  for (int j = 0; j <= ny; ++j) g.y_faces[j] = (j == ny) ? geometry.cabinet_height : j * dy;

  // Shelf first: snap both edge pairs, expand a collapsed pair to one cell.
  CellRect shelf;
  shelf.i0 = snap_face(geometry.shelf_x0, dx);
  shelf.i1 = snap_face(geometry.shelf_x0 + geometry.shelf_width, dx);
  if (shelf.i1 <= shelf.i0) shelf.i1 = shelf.i0 + 1;
  shelf.j0 = snap_face(geometry.shelf_y, dy);
  shelf.j1 = snap_face(geometry.shelf_y + geometry.shelf_thickness, dy);
  if (shelf.j1 <= shelf.j0) shelf.j1 = shelf.j0 + 1;

  // Food keeps its rounded cell counts and rests on the snapped shelf top.
  CellRect food;
  const int food_w_cells = snap_face(geometry.food_width, dx);
  const int food_h_cells = snap_face(geometry.food_height, dy);
  if (food_w_cells < 2 || food_h_cells < 2) {
    std::ostringstream os;
    os << "grid " << nx << "x" << ny << " resolves the food slab to " << food_w_cells << "x"
       << food_h_cells << " cells; at least 2 cells across each dimension are required";
    fail(os.str());
  }
  food.i0 = snap_face(geometry.food_anchor.x, dx);
  food.i1 = food.i0 + food_w_cells;
  food.j0 = std::max(snap_face(geometry.food_anchor.y, dy), shelf.j1);
  food.j1 = food.j0 + food_h_cells;

  require(shelf.i0 >= 0 && shelf.i1 <= nx && shelf.j0 >= 1 && shelf.j1 < ny,
          "snapped shelf leaves the cabinet");
  require(food.i0 >= 1 && food.i1 < nx && food.j0 >= 1 && food.j1 < ny,
          "snapped food slab leaves the cabinet");

  g.labels.assign(nx * ny, CellLabel::Fluid);
  for (int j = shelf.j0; j < shelf.j1; ++j)
    for (int i = shelf.i0; i < shelf.i1; ++i) g.labels[g.idx(i, j)] = CellLabel::Shelf;
  for (int j = food.j0; j < food.j1; ++j)
    for (int i = food.i0; i < food.i1; ++i) g.labels[g.idx(i, j)] = CellLabel::Food;

  // Duct rows on the duct wall.
  g.outlet_j_begin = 0;
  g.outlet_j_end = snap_face(geometry.outlet_height, dy);
  g.inlet_j_begin = snap_face(geometry.cabinet_height - geometry.inlet_height, dy);
  g.inlet_j_end = ny;
  require(g.outlet_j_end >= 1 && g.inlet_j_begin < ny && g.outlet_j_end <= g.inlet_j_begin,
          "snapped duct segments overlap or vanish");

  // Record the snapped geometry so downstream artifacts agree.
  g.snapped = geometry;
  g.snapped.shelf_x0 = shelf.i0 * dx;
  g.snapped.shelf_width = (shelf.i1 - shelf.i0) * dx;
  g.snapped.shelf_y = shelf.j0 * dy;
  g.snapped.shelf_thickness = (shelf.j1 - shelf.j0) * dy;
  g.snapped.food_anchor = {food.i0 * dx, food.j0 * dy};
  g.snapped.food_width = (food.i1 - food.i0) * dx;
  g.snapped.food_height = (food.j1 - food.j0) * dy;
  g.snapped.outlet_height = g.outlet_j_end * dy;
  g.snapped.inlet_height = (g.inlet_j_end - g.inlet_j_begin) * dy;

  // Boundary faces, each exactly once. The duct wall column carries the
  // inlet/outlet/rear segmentation; the other three walls exchange heat with
  // the exterior.
  const bool left = geometry.duct_wall == DuctWall::Left;
  for (int j = 0; j < ny; ++j) {
    BoundarySegment duct_seg;
    if (j < g.outlet_j_end)
      duct_seg = BoundarySegment::Outlet;
    else if (j >= g.inlet_j_begin)
      duct_seg = BoundarySegment::Inlet;
    else
      duct_seg = BoundarySegment::RearWall;
    g.boundary.push_back({g.idx(0, j), Side::West, left ? duct_seg : BoundarySegment::RobinWall});
    g.boundary.push_back({g.idx(nx - 1, j), Side::East, left ? BoundarySegment::RobinWall : duct_seg});
  }
  for (int i = 0; i < nx; ++i) {
    g.boundary.push_back({g.idx(i, 0), Side::South, BoundarySegment::RobinWall});
    g.boundary.push_back({g.idx(i, ny - 1), Side::North, BoundarySegment::RobinWall});
  }

  return g;
}

StructuredGrid uniform_fluid_grid(int nx, int ny, double width, double height) {
  StructuredGrid g;
  g.nx = nx;
  g.ny = ny;
  const double dx = width / nx;
  const double dy = height / ny;
  g.x_faces.resize(nx + 1);
  g.y_faces.resize(ny + 1);
  for (int i = 0; i <= nx; ++i) g.x_faces[i] = (i == nx) ? width : i * dx;
  for (int j = 0; j <= ny; ++j) g.y_faces[j] = (j == ny) ? height : j * dy;
  g.labels.assign(nx * ny, CellLabel::Fluid);
  for (int j = 0; j < ny; ++j) {
    g.boundary.push_back({g.idx(0, j), Side::West, BoundarySegment::RobinWall});
    g.boundary.push_back({g.idx(nx - 1, j), Side::East, BoundarySegment::RobinWall});
  }
  for (int i = 0; i < nx; ++i) {
    g.boundary.push_back({g.idx(i, 0), Side::South, BoundarySegment::RobinWall});
    g.boundary.push_back({g.idx(i, ny - 1), Side::North, BoundarySegment::RobinWall});
  }
  g.snapped.cabinet_width = width;
  g.snapped.cabinet_height = height;
  return g;
}

int locate_point(const StructuredGrid& grid, double x, double y) {
  const auto find = [](const std::vector<double>& faces, double c) {
    if (c < faces.front() || c > faces.back()) throw std::out_of_range("point outside cabinet");
    // Interval (faces[k], faces[k+1]] maps to cell k; the domain edge at
    // faces[0] maps to cell 0, so a point on a shared face takes the
    // lower-index cell.
    auto it = std::lower_bound(faces.begin(), faces.end(), c);
    int k = static_cast<int>(it - faces.begin());
    if (*it == c) return std::max(0, k - 1);
    return k - 1;
  };
  const int i = find(grid.x_faces, x);
  const int j = find(grid.y_faces, y);
  return grid.idx(i, j);
}

Hash256 grid_hash(const StructuredGrid& grid) {
  Hasher h;
  h.update_u64(static_cast<std::uint64_t>(grid.nx));
  h.update_u64(static_cast<std::uint64_t>(grid.ny));
  h.update_f64s(grid.x_faces);
  h.update_f64s(grid.y_faces);
  h.update_u64(grid.labels.size());
  for (CellLabel l : grid.labels) {
    const auto b = static_cast<std::uint8_t>(l);
    h.update(&b, 1);
  }
  h.update_u64(static_cast<std::uint64_t>(grid.inlet_j_begin));
  h.update_u64(static_cast<std::uint64_t>(grid.inlet_j_end));
  h.update_u64(static_cast<std::uint64_t>(grid.outlet_j_begin));
  h.update_u64(static_cast<std::uint64_t>(grid.outlet_j_end));
  h.update_u64(grid.snapped.duct_wall == DuctWall::Left ? 0 : 1);
  return h.digest();
}

}  // namespace frost

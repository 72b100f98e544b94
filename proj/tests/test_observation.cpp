#include <doctest.h>

#include <frost/geometry.hpp>
#include <frost/observation.hpp>

#include <cmath>
#include <vector>

using namespace frost;

TEST_SUITE_BEGIN("observation");

TEST_CASE("pixels tile the domain in origin-anchored blocks") {
  const StructuredGrid g = uniform_fluid_grid(4, 4, 0.04, 0.04);
  const auto pixels = build_pixel_grid(g, 0.02);
  REQUIRE(pixels.size() == 4);
  for (const auto& p : pixels) {
    CHECK(p.cells.size() == 4);
    CHECK(p.x1 - p.x0 == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(p.y1 - p.y0 == doctest::Approx(0.02).epsilon(1e-12));
  }
  CHECK(pixels[0].ti == 0);
  CHECK(pixels[0].tj == 0);

  // One oversized pixel swallows the whole box.
  CHECK(build_pixel_grid(g, 0.04).size() == 1);
  CHECK(build_pixel_grid(g, 0.04)[0].cells.size() == 16);

  CHECK_THROWS_AS(build_pixel_grid(g, 0.015), std::exception);
  CHECK_THROWS_AS(build_pixel_grid(g, 0.0), std::exception);
}

TEST_CASE("far-edge tiles are kept as truncated pixels") {
  const StructuredGrid g = uniform_fluid_grid(5, 4, 0.05, 0.04);
  const auto pixels = build_pixel_grid(g, 0.02);
  CHECK(pixel_tiles(5, 2) == 3);
  CHECK(pixel_tiles(4, 2) == 2);
  REQUIRE(pixels.size() == 6);
  int truncated = 0;
  for (const auto& p : pixels)
    if (p.ti == 2) {
      CHECK(p.cells.size() == 2);  // one column of cells remains
      CHECK(p.x1 - p.x0 == doctest::Approx(0.01).epsilon(1e-12));
      ++truncated;
    } else {
      CHECK(p.cells.size() == 4);
    }
  CHECK(truncated == 2);
}

TEST_CASE("a pixel touching any excluded cell is dropped whole") {
  const StructuredGrid g = uniform_fluid_grid(4, 4, 0.04, 0.04);
  const int banned = g.idx(1, 1);
  const auto pixels =
      build_pixel_grid(g, 0.02, [&](int cell) { return cell != banned; });
  REQUIRE(pixels.size() == 3);
  for (const auto& p : pixels) {
    CHECK(!(p.ti == 0 && p.tj == 0));
    for (int c : p.cells) CHECK(c != banned);
  }
}

TEST_CASE("the reference cabinet tiles into 360 pixels, 352 off-slab") {
  const StructuredGrid g = build_grid(CaseGeometry{}, 70, 80);
  const auto all = build_pixel_grid(g, 0.02);
  CHECK(all.size() == 18 * 20);

  const auto off_slab = build_pixel_grid(
      g, 0.02, [&](int cell) { return g.labels[cell] != CellLabel::Food; });
  CHECK(off_slab.size() == 352);
  for (const auto& p : off_slab)
    for (int c : p.cells) CHECK(g.labels[c] != CellLabel::Food);
}

TEST_CASE("unit-norm columns square to one, average columns to a mean") {
  const StructuredGrid g = uniform_fluid_grid(4, 4, 0.04, 0.04);
  const auto pixels = build_pixel_grid(g, 0.02);

  const ObservationMatrix unit = assemble_observer(g, pixels, SensorMode::UnitNorm);
  CHECK(unit.rows == 16);
  CHECK(unit.count() == 4);
  CHECK(unit.grid_digest == grid_hash(g));
  for (const auto& s : unit.sensors)
    for (double w : s.weights) CHECK(w == doctest::Approx(0.5).epsilon(1e-13));

  const ObservationMatrix avg = assemble_observer(g, pixels, SensorMode::Average);
  for (const auto& s : avg.sensors)
    for (double w : s.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-13));

  // Disjoint unit-norm sensors give an orthonormal W: W^T W = I.
  for (int a = 0; a < unit.count(); ++a)
    for (int b = 0; b < unit.count(); ++b) {
      Field col_a(unit.rows, 0.0), col_b(unit.rows, 0.0);
      for (std::size_t k = 0; k < unit.sensors[a].cells.size(); ++k)
        col_a[unit.sensors[a].cells[k]] = unit.sensors[a].weights[k];
      for (std::size_t k = 0; k < unit.sensors[b].cells.size(); ++k)
        col_b[unit.sensors[b].cells[k]] = unit.sensors[b].weights[k];
      double dot = 0.0;
      for (int r = 0; r < unit.rows; ++r) dot += col_a[r] * col_b[r];
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).scale(1.0).epsilon(1e-14));
    }
}

TEST_CASE("measurements are linear in the field") {
  const StructuredGrid g = uniform_fluid_grid(4, 4, 0.04, 0.04);
  const ObservationMatrix avg =
      assemble_observer(g, build_pixel_grid(g, 0.02), SensorMode::Average);
  const ObservationMatrix unit =
      assemble_observer(g, build_pixel_grid(g, 0.02), SensorMode::UnitNorm);

  const Field constant(16, 10.0);
  for (double v : measure(avg, constant)) CHECK(v == doctest::Approx(10.0).epsilon(1e-13));
  // Four cells at weight 1/2 each: a constant 10 reads 20 in unit-norm mode.
  for (double v : measure(unit, constant)) CHECK(v == doctest::Approx(20.0).epsilon(1e-13));

  Field f1(16), f2(16);
  for (int k = 0; k < 16; ++k) {
    f1[k] = 0.3 * k - 1.0;
    f2[k] = std::cos(0.7 * k);
  }
  const auto m1 = measure(avg, f1);
  const auto m2 = measure(avg, f2);
  Field combo(16);
  for (int k = 0; k < 16; ++k) combo[k] = 2.0 * f1[k] - 0.5 * f2[k];
  const auto mc = measure(avg, combo);
  for (std::size_t s = 0; s < mc.size(); ++s)
    CHECK(mc[s] == doctest::Approx(2.0 * m1[s] - 0.5 * m2[s]).epsilon(1e-12));

  CHECK_THROWS_AS(measure(avg, Field(15, 1.0)), std::exception);
}

TEST_CASE("measurement noise is seeded and reproducible") {
  const StructuredGrid g = build_grid(CaseGeometry{}, 70, 80);
  const ObservationMatrix w =
      assemble_observer(g, build_pixel_grid(g, 0.02), SensorMode::Average);
  const Field T(g.cell_count(), 3.0);

  const auto clean = measure(w, T);
  const auto a = measure(w, T, 0.1, 42);
  const auto b = measure(w, T, 0.1, 42);
  const auto c = measure(w, T, 0.1, 43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a != clean);
  CHECK(measure(w, T, 0.0, 42) == clean);

  double mean = 0.0, var = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) mean += a[k] - clean[k];
  mean /= a.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - clean[k] - mean;
    var += d * d;
  }
  var /= (a.size() - 1);
  CHECK(std::abs(mean) < 0.02);          // 360 samples of sd 0.1
  CHECK(std::sqrt(var) > 0.05);
  CHECK(std::sqrt(var) < 0.2);
}

TEST_CASE("malformed sensor sets are rejected") {
  const StructuredGrid g = uniform_fluid_grid(4, 4, 0.04, 0.04);
  CHECK_THROWS_AS(assemble_observer(g, {}, SensorMode::Average), std::exception);

  PixelSensor empty;
  CHECK_THROWS_AS(assemble_observer(g, {empty}, SensorMode::Average), std::exception);

  PixelSensor stray;
  stray.cells = {99};
  CHECK_THROWS_AS(assemble_observer(g, {stray}, SensorMode::Average), std::exception);

  PixelSensor s1, s2;
  s1.cells = {0, 1};
  s2.cells = {1, 2};  // cell 1 covered twice
  CHECK_THROWS_AS(assemble_observer(g, {s1, s2}, SensorMode::UnitNorm), std::exception);
}

TEST_SUITE_END();

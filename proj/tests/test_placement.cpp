#include <doctest.h>

#include <frost/placement.hpp>

#include <cmath>
#include <random>
#include <set>
#include <vector>

using namespace frost;

namespace {

PodBasis strip_basis(const StructuredGrid& g, const std::vector<Field>& columns,
                     std::vector<double> sigma) {
  PodBasis b;
  b.rows = g.cell_count();
  b.n_max = static_cast<int>(columns.size());
  b.phi.resize(static_cast<std::size_t>(b.rows) * b.n_max);
  for (int c = 0; c < b.n_max; ++c)
    for (int r = 0; r < b.rows; ++r) b.phi[static_cast<std::size_t>(c) * b.rows + r] = columns[c][r];
  b.sigma = std::move(sigma);
  for (double s : b.sigma) b.total_energy_sq += s * s;
  b.grid_digest = grid_hash(g);
  return b;
}

PodBasis random_basis(const StructuredGrid& g, int snapshots, int n_max, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  StoredRun run;
  run.grid_digest = grid_hash(g);
  for (int s = 0; s < snapshots; ++s) {
    Field f(g.cell_count());
    for (auto& v : f) v = dist(eng);
    run.snapshots.push_back({static_cast<double>(s), f});
  }
  return compute_pod(assemble_snapshots({run}, false), n_max);
}

}  // namespace

TEST_SUITE_BEGIN("placement");

TEST_CASE("the three-candidate worked example selects in proven order") {
  const StructuredGrid g = uniform_fluid_grid(3, 1, 0.3, 0.1);
  const double s = 1.0 / std::sqrt(2.0);
  const PodBasis basis = strip_basis(g, {{1, 0, 0}, {0, s, s}}, {2.0, 1.0});
  const SensorPool pool = build_sensor_pool(g, 0.1, SensorMode::UnitNorm);
  REQUIRE(pool.size() == 3);
  CHECK(pool.tiles_x == 3);
  CHECK(pool.tiles_y == 1);

  const Placement p = greedy_place(basis, 2, pool, 3);
  REQUIRE(p.selected.size() == 3);
  REQUIRE(p.objectives.size() == 3);
  // First the strongest single row, then the better of the tied pair (lower
  // index wins), then the remaining one completes an orthonormal stack.
  CHECK(p.selected[0] == 0);
  CHECK(p.selected[1] == 1);
  CHECK(p.selected[2] == 2);
  CHECK(p.objectives[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.objectives[1] == doctest::Approx(s).epsilon(1e-12));
  CHECK(p.objectives[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a single-sensor sweep matches brute-force enumeration") {
  const StructuredGrid g = uniform_fluid_grid(20, 1, 2.0, 0.1);
  const PodBasis basis = random_basis(g, 10, 4, 99);
  const SensorPool pool = build_sensor_pool(g, 0.1, SensorMode::UnitNorm);
  REQUIRE(pool.size() == 20);

  const Placement p = greedy_place(basis, 1, pool, 1);

  int best = -1;
  double best_val = -1.0;
  for (int c = 0; c < pool.size(); ++c) {
    // Single-cell unit-norm candidates read one basis entry directly.
    const int cell = pool.candidates[c].cells[0];
    const double v = std::abs(basis.phi_at(cell, 0));
    if (v > best_val) {
      best_val = v;
      best = c;
    }
  }
  CHECK(p.selected[0] == best);
  CHECK(p.objectives[0] == doctest::Approx(best_val).epsilon(1e-12));
}

TEST_CASE("observability never drops while the budget grows") {
  const StructuredGrid g = uniform_fluid_grid(20, 1, 2.0, 0.1);
  const PodBasis basis = random_basis(g, 12, 4, 123);
  const SensorPool pool = build_sensor_pool(g, 0.1, SensorMode::UnitNorm);

  const int n = 4, m = 12;
  const Placement p = greedy_place(basis, n, pool, m);
  REQUIRE(p.objectives.size() == static_cast<std::size_t>(m));
  // Once the stack is square, each extra row can only raise sigma_n.
  for (int k = n - 1; k + 1 < m; ++k)
    CHECK(p.objectives[k + 1] >= p.objectives[k] - 1e-12);

  // No candidate is used twice and reruns are identical.
  std::set<int> unique(p.selected.begin(), p.selected.end());
  CHECK(unique.size() == p.selected.size());
  const Placement again = greedy_place(basis, n, pool, m);
  CHECK(again.selected == p.selected);
  CHECK(again.objectives == p.objectives);
}

TEST_CASE("placement requests outside the pool are rejected") {
  const StructuredGrid g = uniform_fluid_grid(3, 1, 0.3, 0.1);
  const double s = 1.0 / std::sqrt(2.0);
  const PodBasis basis = strip_basis(g, {{1, 0, 0}, {0, s, s}}, {2.0, 1.0});
  const SensorPool pool = build_sensor_pool(g, 0.1, SensorMode::UnitNorm);

  CHECK_THROWS_AS(greedy_place(basis, 0, pool, 2), std::invalid_argument);
  CHECK_THROWS_AS(greedy_place(basis, 3, pool, 3), std::invalid_argument);
  CHECK_THROWS_AS(greedy_place(basis, 2, pool, 1), std::invalid_argument);
  CHECK_THROWS_AS(greedy_place(basis, 2, pool, 4), std::invalid_argument);
  CHECK_THROWS_AS(regular_placement(pool, 0), std::invalid_argument);
  CHECK_THROWS_AS(regular_placement(pool, 4), std::invalid_argument);
}

TEST_CASE("the regular baseline fills nested rings row-major") {
  const StructuredGrid g = uniform_fluid_grid(8, 8, 0.8, 0.8);
  const SensorPool pool = build_sensor_pool(g, 0.2, SensorMode::Average);
  REQUIRE(pool.size() == 16);
  CHECK(pool.tiles_x == 4);
  CHECK(pool.tiles_y == 4);

  const Placement ring = regular_placement(pool, 12);
  CHECK(ring.objectives.empty());
  const std::vector<std::pair<int, int>> expected = {
      {0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1}, {3, 1},
      {0, 2}, {3, 2}, {0, 3}, {1, 3}, {2, 3}, {3, 3}};
  REQUIRE(ring.selected.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const auto& c = pool.candidates[ring.selected[k]];
    CHECK(c.ti == expected[k].first);
    CHECK(c.tj == expected[k].second);
  }

  // The full budget adds the inner ring, still row-major.
  const Placement full = regular_placement(pool, 16);
  const auto& inner = pool.candidates[full.selected[12]];
  CHECK(inner.ti == 1);
  CHECK(inner.tj == 1);
  std::set<int> unique(full.selected.begin(), full.selected.end());
  CHECK(unique.size() == 16);
}

TEST_CASE("the placement observer keeps selection order and mode") {
  const StructuredGrid g = uniform_fluid_grid(8, 8, 0.8, 0.8);
  const PodBasis basis = random_basis(g, 9, 3, 5);
  const SensorPool pool = build_sensor_pool(g, 0.2, SensorMode::UnitNorm);
  const Placement p = greedy_place(basis, 3, pool, 5);

  const ObservationMatrix w = observer_from_placement(g, pool, p, SensorMode::UnitNorm);
  CHECK(w.count() == 5);
  CHECK(w.rows == g.cell_count());
  for (int k = 0; k < 5; ++k)
    CHECK(w.sensors[k].cells == pool.candidates[p.selected[k]].cells);
  for (const auto& sensor : w.sensors) {
    double norm_sq = 0.0;
    for (double wt : sensor.weights) norm_sq += wt * wt;
    CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("in-span test runs evaluate to numerically zero error") {
  const StructuredGrid g = uniform_fluid_grid(20, 1, 2.0, 0.1);
  const PodBasis basis = random_basis(g, 10, 3, 17);
  const SensorPool pool = build_sensor_pool(g, 0.1, SensorMode::UnitNorm);
  const Placement p = greedy_place(basis, 3, pool, 6);
  const ObservationMatrix w = observer_from_placement(g, pool, p, SensorMode::UnitNorm);

  StoredRun run;
  run.grid_digest = grid_hash(g);
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int s = 0; s < 4; ++s) {
    Field f(g.cell_count(), 0.0);
    for (int mode = 0; mode < 3; ++mode) {
      const double amp = dist(eng);
      for (int r = 0; r < g.cell_count(); ++r) f[r] += amp * basis.phi_at(r, mode);
    }
    run.snapshots.push_back({10.0 * s, f});
  }

  const PlacementEvaluation ev = evaluate_placement(basis, 3, w, {run});
  REQUIRE(ev.times.size() == 4);
  REQUIRE(ev.rel_error_percent.size() == 4);
  CHECK(ev.times[1] == 10.0);
  double mean = 0.0;
  for (double e : ev.rel_error_percent) {
    CHECK(e < 1e-8);  // percent
    mean += e;
  }
  mean /= 4.0;
  CHECK(ev.time_average == doctest::Approx(mean).scale(1.0).epsilon(1e-15));

  StoredRun hollow;
  hollow.grid_digest = grid_hash(g);
  CHECK_THROWS_AS(evaluate_placement(basis, 3, w, {hollow}), std::invalid_argument);
}

TEST_SUITE_END();

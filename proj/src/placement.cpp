#include "frost/placement.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace frost {

SensorPool build_sensor_pool(const StructuredGrid& grid, double pixel_size, SensorMode mode,
                             const std::function<bool(int)>& include_cell) {
  SensorPool pool;
  std::vector<PixelSensor> pixels = build_pixel_grid(grid, pixel_size, include_cell);
  // assemble_observer fixes the weights and enforces disjointness.
  ObservationMatrix w = assemble_observer(grid, std::move(pixels), mode);
  pool.candidates = std::move(w.sensors);
  int tx = 0, ty = 0;
  for (const PixelSensor& s : pool.candidates) {
    tx = std::max(tx, s.ti + 1);
    ty = std::max(ty, s.tj + 1);
  }
  pool.tiles_x = tx;
  pool.tiles_y = ty;
  return pool;
}

Placement greedy_place(const PodBasis& basis, int n, const SensorPool& pool, int m_target) {
  const int pool_size = pool.size();
  if (n < 1 || n > basis.n_max) throw std::invalid_argument("basis truncation out of range");
  if (m_target < n) {
    throw std::invalid_argument("placement needs at least n sensors for well-posedness");
  }
  if (m_target > pool_size) throw std::invalid_argument("candidate pool exhausted");

  // Candidate rows w^T Phi_n, computed once.
  Eigen::MatrixXd rows(pool_size, n);
  for (int c = 0; c < pool_size; ++c) {
    const PixelSensor& px = pool.candidates[c];
    for (int j = 0; j < n; ++j) {
      const double* col = basis.phi.data() + static_cast<std::size_t>(j) * basis.rows;
      double v = 0.0;
      for (std::size_t k = 0; k < px.cells.size(); ++k) v += px.weights[k] * col[px.cells[k]];
      rows(c, j) = v;
    }
  }

  Placement placement;
  std::vector<char> used(pool_size, 0);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> objective(pool_size);

  for (int step = 1; step <= m_target; ++step) {
    // The smallest non-zero singular value of the grown row stack equals the
    // min(step, n)-th largest eigenvalue of the column Gram, square-rooted.
    const int order = std::min(step, n);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < pool_size; ++c) {
      if (used[c]) {
        objective[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const Eigen::MatrixXd grown = gram + rows.row(c).transpose() * rows.row(c);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(grown, Eigen::EigenvaluesOnly);
      objective[c] = std::sqrt(std::max(0.0, es.eigenvalues()[n - order]));
    }
    int best = -1;
    for (int c = 0; c < pool_size; ++c) {
      if (best < 0 || objective[c] > objective[best]) best = c;  // ties keep the lowest index
    }
    used[best] = 1;
    placement.selected.push_back(best);
    placement.objectives.push_back(objective[best]);
    gram += rows.row(best).transpose() * rows.row(best);
  }
  return placement;
}

Placement regular_placement(const SensorPool& pool, int m_target) {
  if (m_target < 1) throw std::invalid_argument("placement needs at least one sensor");
  if (m_target > pool.size()) throw std::invalid_argument("candidate pool exhausted");

  std::vector<int> order(pool.candidates.size());
  std::iota(order.begin(), order.end(), 0);
  auto ring = [&](int c) {
    const PixelSensor& s = pool.candidates[c];
    return std::min(std::min(s.ti, pool.tiles_x - 1 - s.ti),
                    std::min(s.tj, pool.tiles_y - 1 - s.tj));
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const int ra = ring(a), rb = ring(b);
    if (ra != rb) return ra < rb;
    const PixelSensor& sa = pool.candidates[a];
    const PixelSensor& sb = pool.candidates[b];
    if (sa.tj != sb.tj) return sa.tj < sb.tj;
    return sa.ti < sb.ti;
  });

  Placement placement;
  placement.selected.assign(order.begin(), order.begin() + m_target);
  return placement;
}

ObservationMatrix observer_from_placement(const StructuredGrid& grid, const SensorPool& pool,
                                          const Placement& placement, SensorMode mode) {
  std::vector<PixelSensor> sensors;
  sensors.reserve(placement.selected.size());
  for (int idx : placement.selected) sensors.push_back(pool.candidates.at(idx));
  return assemble_observer(grid, std::move(sensors), mode);
}

PlacementEvaluation evaluate_placement(const PodBasis& basis, int n, const ObservationMatrix& w,
                                       const std::vector<StoredRun>& test_runs) {
  const CrossGramian cg = cross_gramian(w, basis, n);
  std::vector<double> mean_shift;
  if (basis.mean_subtracted) mean_shift = measure(w, basis.mean);

  PlacementEvaluation ev;
  for (const StoredRun& run : test_runs) {
    for (const Snapshot& snap : run.snapshots) {
      std::vector<double> ell = measure(w, snap.temperature);
      if (!mean_shift.empty()) {
        for (std::size_t k = 0; k < ell.size(); ++k) ell[k] -= mean_shift[k];
      }
      const LeastSquaresSolution sol = solve_normal_equations(cg, ell);
      const Field rec = lift_coefficients(basis, n, sol.coefficients);
      ev.times.push_back(snap.time);
      ev.rel_error_percent.push_back(relative_l2_error(snap.temperature, rec));
    }
  }
  if (ev.rel_error_percent.empty()) throw std::invalid_argument("no test snapshots to evaluate");
  double sum = 0.0;
  for (double v : ev.rel_error_percent) sum += v;
  ev.time_average = sum / ev.rel_error_percent.size();
  return ev;
}

}  // namespace frost

#pragma once

#include <functional>
#include <vector>

#include "frost/estimation.hpp"
#include "frost/observation.hpp"
#include "frost/pod.hpp"

namespace frost {

/// Candidate sensor set for placement. Candidates are pairwise disjoint
/// pixels; tiles_x/tiles_y give the pixel-grid extent the candidates were
/// cut from (used by the nested-ring rule).
struct SensorPool {
  std::vector<PixelSensor> candidates;
  int tiles_x = 0, tiles_y = 0;

  int size() const { return static_cast<int>(candidates.size()); }
};

/// Pixel grid plus exclusion predicate in one step. Weights follow the
/// requested mode so candidate rows of W are ready for placement sweeps.
SensorPool build_sensor_pool(const StructuredGrid& grid, double pixel_size, SensorMode mode,
                             const std::function<bool(int)>& include_cell = {});

struct Placement {
  std::vector<int> selected;      // pool indices in selection order
  std::vector<double> objectives; // the maximized value at each step
};

/// Greedy observability maximization. The first pick maximizes the l2 norm
/// of the candidate's basis row; every later pick maximizes the smallest
/// non-zero singular value of the stacked selected-rows matrix (the i-th
/// value while i <= n, then sigma_n). Ties resolve to the lowest candidate
/// index. Requires n <= m_target <= pool size.
Placement greedy_place(const PodBasis& basis, int n, const SensorPool& pool, int m_target);

/// Deterministic baseline: nested rectangular rings of pixels from the
/// domain boundary inward, row-major within each ring, truncated at
/// m_target.
Placement regular_placement(const SensorPool& pool, int m_target);

/// Observer restricted to the selected candidates, in selection order.
ObservationMatrix observer_from_placement(const StructuredGrid& grid, const SensorPool& pool,
                                          const Placement& placement, SensorMode mode);

struct PlacementEvaluation {
  std::vector<double> times;
  std::vector<double> rel_error_percent;  // per evaluated snapshot
  double time_average = 0.0;              // plain mean over snapshots
};

/// Reconstructs every snapshot of the test runs under the observer and
/// reports the relative l2 error series.
PlacementEvaluation evaluate_placement(const PodBasis& basis, int n, const ObservationMatrix& w,
                                       const std::vector<StoredRun>& test_runs);

}  // namespace frost

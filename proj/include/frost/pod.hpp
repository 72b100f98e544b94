#pragma once

#include <vector>

#include "frost/hash.hpp"
#include "frost/solver.hpp"

namespace frost {

/// One stored forward run: the snapshot series plus the digest of the grid
/// it was computed on.
struct StoredRun {
  Hash256 grid_digest{};
  ParameterSample params;
  std::vector<Snapshot> snapshots;
};

struct SnapshotColumnMeta {
  int run = 0;
  double time = 0.0;
  ParameterSample params;
};

/// Column-major N x K matrix of states, columns ordered run-major then by
/// time within each run.
struct SnapshotMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
  std::vector<SnapshotColumnMeta> meta;
  Hash256 grid_digest{};
  bool mean_subtracted = false;
  std::vector<double> mean;  // rows entries when mean_subtracted
  double scale = 1.0;        // uniform entry scaling applied at assembly
};

/// Truncated left singular basis of a snapshot matrix. sigma holds the full
/// computed spectrum (min(N, K) values) even though phi keeps only n_max
/// columns, so energy ratios over the whole spectrum stay available.
struct PodBasis {
  int rows = 0;
  int n_max = 0;
  std::vector<double> phi;    // rows x n_max, column-major, orthonormal
  std::vector<double> sigma;  // full spectrum, non-increasing
  double total_energy_sq = 0.0;  // sum of all sigma^2
  bool mean_subtracted = false;
  std::vector<double> mean;
  Hash256 grid_digest{};

  double phi_at(int r, int c) const { return phi[static_cast<std::size_t>(c) * rows + r]; }
};

/// Concatenates run snapshots into columns. All runs must carry the same
/// grid digest and at least one snapshot overall. `scale` multiplies every
/// entry (sqrt of the cell area gives the area-weighted inner product;
/// 1 keeps the plain Euclidean one). subtract_mean removes and records the
/// column mean.
SnapshotMatrix assemble_snapshots(const std::vector<StoredRun>& runs, bool subtract_mean,
                                  double scale = 1.0);

/// Thin SVD, keeping the n_max leading left singular vectors. Sign
/// convention: the largest-magnitude entry of each column is positive.
/// n_max outside [1, min(N, K)] or non-finite data throws.
PodBasis compute_pod(const SnapshotMatrix& a, int n_max);

/// sqrt(sum_{i>n} sigma_i^2 / sum_i sigma_i^2): the relative Frobenius error
/// of the rank-n truncation. n in [0, n_max]; a zero matrix throws.
double tail_energy(const PodBasis& basis, int n);

}  // namespace frost

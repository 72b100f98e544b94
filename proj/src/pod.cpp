#include "frost/pod.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace frost {

SnapshotMatrix assemble_snapshots(const std::vector<StoredRun>& runs, bool subtract_mean,
                                  double scale) {
  if (runs.empty()) throw std::invalid_argument("no runs to assemble");
  if (!(scale > 0.0)) throw std::invalid_argument("snapshot scale must be positive");

  SnapshotMatrix a;
  a.grid_digest = runs.front().grid_digest;
  a.scale = scale;
  std::size_t cols = 0;
  for (const StoredRun& r : runs) {
    if (r.grid_digest != a.grid_digest) {
      throw std::invalid_argument("runs were computed on different grids");
    }
    cols += r.snapshots.size();
  }
  if (cols == 0) throw std::invalid_argument("runs contain no snapshots");
  a.rows = static_cast<int>(runs.front().snapshots.front().temperature.size());
  a.cols = static_cast<int>(cols);
  a.data.resize(static_cast<std::size_t>(a.rows) * a.cols);
  a.meta.reserve(cols);

  std::size_t col = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const Snapshot& s : runs[r].snapshots) {
      if (static_cast<int>(s.temperature.size()) != a.rows) {
        throw std::invalid_argument("snapshot length does not match the grid");
      }
      double* dst = a.data.data() + col * a.rows;
      for (int k = 0; k < a.rows; ++k) {
        const double v = s.temperature[k] * scale;
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite snapshot entry");
        dst[k] = v;
      }
      a.meta.push_back({static_cast<int>(r), s.time, runs[r].params});
      ++col;
    }
  }

  if (subtract_mean) {
    a.mean.assign(a.rows, 0.0);
    for (int c = 0; c < a.cols; ++c) {
      const double* src = a.data.data() + static_cast<std::size_t>(c) * a.rows;
      for (int k = 0; k < a.rows; ++k) a.mean[k] += src[k];
    }
    for (int k = 0; k < a.rows; ++k) a.mean[k] /= a.cols;
    for (int c = 0; c < a.cols; ++c) {
      double* dst = a.data.data() + static_cast<std::size_t>(c) * a.rows;
      for (int k = 0; k < a.rows; ++k) dst[k] -= a.mean[k];
    }
    a.mean_subtracted = true;
  }
  return a;
}

PodBasis compute_pod(const SnapshotMatrix& a, int n_max) {
  const int rank_cap = std::min(a.rows, a.cols);
  if (a.rows < 1 || a.cols < 1) throw std::invalid_argument("empty snapshot matrix");
  if (n_max < 1 || n_max > rank_cap) {
    throw std::invalid_argument("basis size must lie in [1, min(N, K)]");
  }

  Eigen::Map<const Eigen::MatrixXd> m(a.data.data(), a.rows, a.cols);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);

  PodBasis basis;
  basis.rows = a.rows;
  basis.n_max = n_max;
  basis.grid_digest = a.grid_digest;
  basis.mean_subtracted = a.mean_subtracted;
  basis.mean = a.mean;

  const Eigen::VectorXd& sv = svd.singularValues();
  basis.sigma.assign(sv.data(), sv.data() + sv.size());
  basis.total_energy_sq = 0.0;
  for (double s : basis.sigma) basis.total_energy_sq += s * s;

  Eigen::MatrixXd u = svd.matrixU().leftCols(n_max);
  for (int c = 0; c < n_max; ++c) {
    int arg = 0;
    double best = -1.0;
    for (int r = 0; r < a.rows; ++r) {
      const double mag = std::abs(u(r, c));
      if (mag > best) {
        best = mag;
        arg = r;
      }
    }
    if (u(arg, c) < 0.0) u.col(c) = -u.col(c);
  }
  basis.phi.resize(static_cast<std::size_t>(a.rows) * n_max);
  std::memcpy(basis.phi.data(), u.data(), basis.phi.size() * sizeof(double));
  return basis;
}

double tail_energy(const PodBasis& basis, int n) {
  if (n < 0 || n > basis.n_max) throw std::invalid_argument("truncation outside [0, n_max]");
  if (!(basis.total_energy_sq > 0.0)) {
    throw std::invalid_argument("tail energy of a zero matrix is undefined");
  }
  double tail = 0.0;
  for (std::size_t i = n; i < basis.sigma.size(); ++i) tail += basis.sigma[i] * basis.sigma[i];
  return std::sqrt(tail / basis.total_energy_sq);
}

}  // namespace frost

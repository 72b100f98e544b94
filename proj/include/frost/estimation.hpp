#pragma once

#include <limits>
#include <vector>

#include "frost/materials.hpp"
#include "frost/observation.hpp"
#include "frost/pod.hpp"

namespace frost {

/// G = W^T Phi_n with its cached SVD factors, ready for pseudo-inverse
/// solves. Shapes obey N > m >= n; n > m throws (well-posedness ordering).
struct CrossGramian {
  int m = 0, n = 0;
  std::vector<double> g;      // m x n, column-major
  std::vector<double> s_hat;  // min(m, n) singular values, non-increasing
  std::vector<double> u;      // m x n, column-major (thin)
  std::vector<double> v;      // n x n, column-major
};

CrossGramian cross_gramian(const ObservationMatrix& w, const PodBasis& basis, int n);

struct LeastSquaresSolution {
  std::vector<double> coefficients;  // length n
  double residual = 0.0;             // ||ell - G c||_2
};

/// Minimum-norm least squares via the cached SVD. Throws when
/// s_hat_n < 1e-12 * s_hat_1 (ill-conditioned; message carries the condition
/// number) or on a dimension mismatch.
LeastSquaresSolution solve_normal_equations(const CrossGramian& g,
                                            const std::vector<double>& ell);

struct ReconstructionResult {
  std::vector<double> coefficients;
  Field field;  // Phi_n c (plus the stored mean when the basis subtracts it)
  int n = 0;
  double residual = 0.0;
};

/// Full pipeline for one measurement vector: cross-Gramian, regularized
/// least squares, lift back to the grid. A mean-subtracting basis has
/// W^T mean removed from ell first and the mean added back to the field.
ReconstructionResult reconstruct(const PodBasis& basis, const ObservationMatrix& w, int n,
                                 const std::vector<double>& ell);

/// Phi_n c plus the stored mean (when the basis subtracts one).
Field lift_coefficients(const PodBasis& basis, int n, const std::vector<double>& c);

constexpr double kUnobservable = std::numeric_limits<double>::infinity();

/// e(n) = tail_energy(n) / s_hat_n for n in [n_lo, n_hi]; a singular
/// cross-Gramian (s_hat_n = 0) records the +infinity sentinel instead of
/// failing. Bounds must satisfy 1 <= n_lo <= n_hi <= min(m, n_max) - 1.
std::vector<double> apriori_bound_curve(const PodBasis& basis, const ObservationMatrix& w,
                                        int n_lo, int n_hi);

/// Argmin of the curve; ties resolve to the smaller dimension. curve[k] is
/// e(n_lo + k). All-infinite curves throw.
int select_rom_dimension(const std::vector<double>& curve, int n_lo);

/// ||truth - approx|| / ||truth|| * 100; a zero truth field throws.
double relative_l2_error(const Field& truth, const Field& approx);

/// Pointwise |truth_k - approx_k| / |mean(truth)| * 100 over a time series
/// at one location; a zero time-average throws.
std::vector<double> local_relative_error(const std::vector<double>& truth_series,
                                         const std::vector<double>& approx_series);

/// Trapezoidal time integral of the series divided by the total duration.
/// A single-sample series is returned as-is.
double accumulated_error(const std::vector<double>& times, const std::vector<double>& series);

/// dT/dt in degC per hour from a series sampled at `times` seconds: centered
/// differences inside, one-sided at the endpoints.
std::vector<double> freezing_rate(const std::vector<double>& times,
                                  const std::vector<double>& temps);

/// Elementwise frozen-to-thawed fraction of a temperature field. Only food
/// cells carry physical meaning; callers mask with the grid labels.
Field liquid_fraction_field(const MaterialModel& mat, const Field& T);

/// Label-aware volumetric heat capacity of a temperature field.
Field heat_capacity_field(const MaterialModel& mat, const StructuredGrid& grid, const Field& T);

}  // namespace frost

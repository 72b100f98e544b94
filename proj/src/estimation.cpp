#include "frost/estimation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace frost {

CrossGramian cross_gramian(const ObservationMatrix& w, const PodBasis& basis, int n) {
  const int m = w.count();
  if (n < 1 || n > basis.n_max) throw std::invalid_argument("basis truncation out of range");
  if (n > m) {
    std::ostringstream msg;
    msg << "well-posedness needs sensors >= modes (m = " << m << ", n = " << n << ")";
    throw std::invalid_argument(msg.str());
  }
  if (w.rows != basis.rows) throw std::invalid_argument("observer and basis grids differ");

  CrossGramian cg;
  cg.m = m;
  cg.n = n;
  cg.g.assign(static_cast<std::size_t>(m) * n, 0.0);
  for (int s = 0; s < m; ++s) {
    const PixelSensor& px = w.sensors[s];
    for (int c = 0; c < n; ++c) {
      const double* col = basis.phi.data() + static_cast<std::size_t>(c) * basis.rows;
      double v = 0.0;
      for (std::size_t k = 0; k < px.cells.size(); ++k) v += px.weights[k] * col[px.cells[k]];
      cg.g[static_cast<std::size_t>(c) * m + s] = v;
    }
  }

  Eigen::Map<const Eigen::MatrixXd> gm(cg.g.data(), m, n);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(gm, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  cg.s_hat.assign(sv.data(), sv.data() + sv.size());
  cg.u.resize(static_cast<std::size_t>(m) * svd.matrixU().cols());
  std::memcpy(cg.u.data(), svd.matrixU().data(), cg.u.size() * sizeof(double));
  cg.v.resize(static_cast<std::size_t>(n) * svd.matrixV().cols());
  std::memcpy(cg.v.data(), svd.matrixV().data(), cg.v.size() * sizeof(double));
  return cg;
}

LeastSquaresSolution solve_normal_equations(const CrossGramian& g, const std::vector<double>& ell) {
  if (static_cast<int>(ell.size()) != g.m) {
    throw std::invalid_argument("measurement length does not match the cross-Gramian");
  }
  const double s1 = g.s_hat.front();
  const double sn = g.s_hat.back();
  if (!(sn >= 1e-12 * s1) || s1 == 0.0) {
    std::ostringstream msg;
    msg << "cross-Gramian is ill-conditioned: condition number "
        << (sn > 0.0 ? s1 / sn : std::numeric_limits<double>::infinity());
    throw std::runtime_error(msg.str());
  }

  // c = V S^-1 U^T ell, never forming G^T G.
  const int r = static_cast<int>(g.s_hat.size());
  Eigen::Map<const Eigen::MatrixXd> u(g.u.data(), g.m, r);
  Eigen::Map<const Eigen::MatrixXd> v(g.v.data(), g.n, r);
  Eigen::Map<const Eigen::VectorXd> l(ell.data(), g.m);
  Eigen::VectorXd z = u.transpose() * l;
  for (int k = 0; k < r; ++k) z[k] /= g.s_hat[k];
  Eigen::VectorXd c = v * z;

  Eigen::Map<const Eigen::MatrixXd> gm(g.g.data(), g.m, g.n);
  LeastSquaresSolution sol;
  sol.coefficients.assign(c.data(), c.data() + c.size());
  sol.residual = (l - gm * c).norm();
  return sol;
}

ReconstructionResult reconstruct(const PodBasis& basis, const ObservationMatrix& w, int n,
                                 const std::vector<double>& ell) {
  const CrossGramian cg = cross_gramian(w, basis, n);
  std::vector<double> rhs = ell;
  if (basis.mean_subtracted) {
    const std::vector<double> shift = measure(w, basis.mean);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= shift[k];
  }
  const LeastSquaresSolution sol = solve_normal_equations(cg, rhs);

  ReconstructionResult res;
  res.n = n;
  res.residual = sol.residual;
  res.coefficients = sol.coefficients;
  res.field = lift_coefficients(basis, n, sol.coefficients);
  return res;
}

Field lift_coefficients(const PodBasis& basis, int n, const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != n || n < 0 || n > basis.n_max) {
    throw std::invalid_argument("coefficient length does not match the truncation");
  }
  Field field(basis.rows, 0.0);
  for (int j = 0; j < n; ++j) {
    const double* col = basis.phi.data() + static_cast<std::size_t>(j) * basis.rows;
    const double coef = c[j];
    for (int k = 0; k < basis.rows; ++k) field[k] += coef * col[k];
  }
  if (basis.mean_subtracted) {
    for (int k = 0; k < basis.rows; ++k) field[k] += basis.mean[k];
  }
  return field;
}

std::vector<double> apriori_bound_curve(const PodBasis& basis, const ObservationMatrix& w,
                                        int n_lo, int n_hi) {
  const int cap = std::min(w.count(), basis.n_max) - 1;
  if (n_lo < 1 || n_hi < n_lo || n_hi > cap) {
    throw std::invalid_argument("bound curve range must lie in [1, min(m, n_max) - 1]");
  }
  // One wide cross-Gramian; every truncation is a leading block of it.
  const CrossGramian wide = cross_gramian(w, basis, n_hi);
  Eigen::Map<const Eigen::MatrixXd> gm(wide.g.data(), wide.m, wide.n);

  std::vector<double> curve(n_hi - n_lo + 1);
  for (int n = n_lo; n <= n_hi; ++n) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(gm.leftCols(n));
    const double s_n = svd.singularValues()[n - 1];
    curve[n - n_lo] = s_n > 0.0 ? tail_energy(basis, n) / s_n : kUnobservable;
  }
  return curve;
}

int select_rom_dimension(const std::vector<double>& curve, int n_lo) {
  if (curve.empty()) throw std::invalid_argument("empty bound curve");
  int best = -1;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (std::isfinite(curve[k]) && (best < 0 || curve[k] < curve[best])) {
      best = static_cast<int>(k);
    }
  }
  if (best < 0) throw std::runtime_error("no observable dimension: the whole curve is infinite");
  return n_lo + best;
}

double relative_l2_error(const Field& truth, const Field& approx) {
  if (truth.size() != approx.size()) throw std::invalid_argument("field sizes differ");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double d = truth[k] - approx[k];
    num += d * d;
    den += truth[k] * truth[k];
  }
  if (!(den > 0.0)) throw std::invalid_argument("relative error of a zero field is undefined");
  return std::sqrt(num / den) * 100.0;
}

std::vector<double> local_relative_error(const std::vector<double>& truth_series,
                                         const std::vector<double>& approx_series) {
  if (truth_series.size() != approx_series.size() || truth_series.empty()) {
    throw std::invalid_argument("series lengths differ or are empty");
  }
  double mean = 0.0;
  for (double v : truth_series) mean += v;
  mean /= truth_series.size();
  if (mean == 0.0) throw std::invalid_argument("zero time-average reference at this point");
  std::vector<double> out(truth_series.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::abs(truth_series[k] - approx_series[k]) / std::abs(mean) * 100.0;
  }
  return out;
}

double accumulated_error(const std::vector<double>& times, const std::vector<double>& series) {
  if (times.size() != series.size() || series.empty()) {
    throw std::invalid_argument("series and timeline disagree or are empty");
  }
  if (series.size() == 1) return series.front();
  double integral = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    integral += 0.5 * (series[k] + series[k - 1]) * (times[k] - times[k - 1]);
  }
  const double duration = times.back() - times.front();
  if (!(duration > 0.0)) throw std::invalid_argument("timeline must be increasing");
  return integral / duration;
}

std::vector<double> freezing_rate(const std::vector<double>& times,
                                  const std::vector<double>& temps) {
  if (times.size() != temps.size() || times.size() < 2) {
    throw std::invalid_argument("rate needs at least two samples");
  }
  const std::size_t n = times.size();
  std::vector<double> rate(n);
  rate[0] = (temps[1] - temps[0]) / (times[1] - times[0]);
  rate[n - 1] = (temps[n - 1] - temps[n - 2]) / (times[n - 1] - times[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    rate[k] = (temps[k + 1] - temps[k - 1]) / (times[k + 1] - times[k - 1]);
  }
  for (double& v : rate) v *= 3600.0;  // per second to per hour
  return rate;
}

Field liquid_fraction_field(const MaterialModel& mat, const Field& T) {
  Field out(T.size());
  for (std::size_t k = 0; k < T.size(); ++k) out[k] = mat.liquid_fraction(T[k]);
  return out;
}

Field heat_capacity_field(const MaterialModel& mat, const StructuredGrid& grid, const Field& T) {
  Field out(T.size());
  for (std::size_t k = 0; k < T.size(); ++k) {
    out[k] = mat.volumetric_heat_capacity(grid.labels[k], T[k]);
  }
  return out;
}

}  // namespace frost

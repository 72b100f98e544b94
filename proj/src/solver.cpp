#include "frost/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "frost/velocity.hpp"

namespace frost {

namespace {

double unit_draw(std::mt19937_64& eng) {
  // Top 53 bits to a double in [0, 1); the std distributions are
  // implementation-defined, this mapping is not.
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<ParameterSample> sample_parameters(int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  std::mt19937_64 eng(seed);
  std::vector<ParameterSample> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    ParameterSample s;
    s.u_in = 0.15 + unit_draw(eng) * (0.25 - 0.15);
    s.t_cold = -26.0 + unit_draw(eng) * (-18.0 + 26.0);
    s.t_ext = 18.0 + unit_draw(eng) * (26.0 - 18.0);
    s.h_ext = 0.4 + unit_draw(eng) * (1.2 - 0.4);
    out.push_back(s);
  }
  return out;
}

namespace {

// Builds the linear system of one Picard iterate: material properties are
// frozen at `frozen`, everything else is implicit. The advective stencil
// coefficients in ws.sys.adv are built once per step by the caller and left
// untouched here: the smoothness weights straddle the temperature jump at
// the food surface, and re-deriving them from each iterate feeds that jump
// back into the iteration as a limit cycle no relaxation breaks.
void assemble_system(const StructuredGrid& g, const MaterialModel& mat, const VelocityField& vel,
                     const ParameterSample& bc, const BdfCoefficients& bdf,
                     const SolverOptions& opt, const Field& frozen, const Field& t_n,
                     const Field& t_nm1, const Field& t_nm2, double time_new,
                     SolverWorkspace& ws) {
  const int nx = g.nx, ny = g.ny;
  const double dx = g.dx(), dy = g.dy();
  const double area = dx * dy;
  const double rho_cp_air = mat.air.rho_cp();
  const double inv_dt = 1.0 / opt.dt;

  kernels::SystemCoeffs& sys = ws.sys;
  sys.adv_scale_x = rho_cp_air * dy;
  sys.adv_scale_y = rho_cp_air * dx;

  ws.lambda_cell.resize(g.cell_count());
  ws.rhs.assign(g.cell_count(), 0.0);
  const double hw = opt.property_smoothing;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < g.cell_count(); ++c) {
    const CellLabel label = g.labels[c];
    double lam, rc;
    if (label == CellLabel::Food && hw > 0.0) {
      // Windowed table sampling; see SolverOptions::property_smoothing. The
      // floor keeps the mass term positive however narrow the window.
      lam = integrate_property(mat.food_lambda, frozen[c] - hw, frozen[c] + hw) / (2.0 * hw);
      rc = mat.enthalpy_delta(label, frozen[c] - hw, frozen[c] + hw) / (2.0 * hw);
      rc = std::max(rc, opt.rho_c_floor);
    } else {
      lam = mat.conductivity(label, frozen[c]);
      rc = mat.volumetric_heat_capacity(label, frozen[c]);
      if (label == CellLabel::Food) rc = std::max(rc, opt.rho_c_floor);
    }
    if (label == CellLabel::Shelf && !opt.shelf_conducting) lam = 0.0;
    ws.lambda_cell[c] = lam;
    const double m = rc * area * inv_dt;
    sys.local_diag[c] = m * bdf.c1;
    double b = -m * (bdf.c2 * t_n[c] + bdf.c3 * t_nm1[c] + bdf.c4 * t_nm2[c]);
    if (opt.source) b += area * opt.source(g.cell_x(c % nx), g.cell_y(c / nx), time_new);
    ws.rhs[c] = b;
  }

  // Harmonic-mean conductances on interior faces; a zero side (masked shelf)
  // makes the face adiabatic.
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double la = ws.lambda_cell[g.idx(i - 1, j)];
      const double lb = ws.lambda_cell[g.idx(i, j)];
      const double s = la + lb;
      sys.xtrans[j * (nx + 1) + i] = s > 0.0 ? dy * (2.0 * la * lb / s) / dx : 0.0;
    }
  }
#pragma omp parallel for schedule(static)
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double la = ws.lambda_cell[g.idx(i, j - 1)];
      const double lb = ws.lambda_cell[g.idx(i, j)];
      const double s = la + lb;
      sys.ytrans[j * nx + i] = s > 0.0 ? dx * (2.0 * la * lb / s) / dy : 0.0;
    }
  }

  // h_ext = 0 gives an infinite wall resistance, i.e. adiabatic walls.
  const double r_wall = 1.0 / bc.h_ext + opt.wall_thickness / opt.wall_lambda;
  for (const BoundaryFace& f : g.boundary) {
    const int c = f.cell;
    const int i = c % nx, j = c / nx;
    const double len = (f.side == Side::West || f.side == Side::East) ? dy : dx;
    switch (f.segment) {
      case BoundarySegment::RobinWall: {
        const double coef = len / r_wall;
        sys.local_diag[c] += coef;
        ws.rhs[c] += coef * bc.t_ext;
        break;
      }
      case BoundarySegment::Inlet:
      case BoundarySegment::Outlet: {
        double u_out = 0.0;
        switch (f.side) {
          case Side::West: u_out = -vel.u[vel.xf(i, j)]; break;
          case Side::East: u_out = vel.u[vel.xf(i + 1, j)]; break;
          case Side::South: u_out = -vel.v[vel.yf(i, j)]; break;
          case Side::North: u_out = vel.v[vel.yf(i, j + 1)]; break;
        }
        const double coef = rho_cp_air * len * u_out;
        if (f.segment == BoundarySegment::Inlet) {
          ws.rhs[c] -= coef * bc.t_cold;  // prescribed inflow temperature
        } else {
          sys.local_diag[c] += coef;  // first-order upwind outflow
        }
        break;
      }
      case BoundarySegment::RearWall:
        break;  // adiabatic duct-wall segment
    }
  }

#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = j * nx + i;
      double d = sys.local_diag[c] + sys.xtrans[j * (nx + 1) + i] +
                 sys.xtrans[j * (nx + 1) + i + 1] + sys.ytrans[j * nx + i] +
                 sys.ytrans[(j + 1) * nx + i] +
                 sys.adv_scale_x *
                     (sys.adv.x[j * (nx + 1) + i + 1][1] - sys.adv.x[j * (nx + 1) + i][2]) +
                 sys.adv_scale_y * (sys.adv.y[(j + 1) * nx + i][1] - sys.adv.y[j * nx + i][2]);
      if (!(std::abs(d) > 1e-300)) d = 1.0;
      sys.jacobi[c] = d;
    }
  }
}

// BiCGSTAB with a symmetric Gauss-Seidel preconditioner over the diffusive
// skeleton. x carries the initial guess; returns the iteration count. The
// residual is checked before the first iteration so an already-converged
// guess passes through untouched.
int bicgstab(const kernels::SystemCoeffs& sys, const Field& b, Field& x, double tol,
             int max_iters, SolverWorkspace& ws) {
  const std::size_t n = b.size();
  ws.r.resize(n);
  ws.rhat.resize(n);
  ws.p.assign(n, 0.0);
  ws.v.assign(n, 0.0);
  ws.s.resize(n);
  ws.t.resize(n);
  ws.y.resize(n);
  ws.z.resize(n);

  kernels::apply_system(sys, x, ws.r);
  for (std::size_t k = 0; k < n; ++k) ws.r[k] = b[k] - ws.r[k];
  const double bnorm = std::sqrt(kernels::det_dot(b, b));
  const double target = tol * (bnorm > 0.0 ? bnorm : 1.0);
  std::vector<double> hist;
  double rnorm = std::sqrt(kernels::det_dot(ws.r, ws.r));
  hist.push_back(bnorm > 0.0 ? rnorm / bnorm : rnorm);
  if (rnorm <= target) return 0;

  ws.rhat = ws.r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= max_iters; ++it) {
    const double rho_new = kernels::det_dot(ws.rhat, ws.r);
    if (rho_new == 0.0 || omega == 0.0) {
      throw SolverError("linear solver breakdown", std::move(hist));
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t k = 0; k < n; ++k) {
      ws.p[k] = ws.r[k] + beta * (ws.p[k] - omega * ws.v[k]);
    }
    kernels::sgs_apply(sys, ws.p, ws.y);
    kernels::apply_system(sys, ws.y, ws.v);
    const double rv = kernels::det_dot(ws.rhat, ws.v);
    if (rv == 0.0) throw SolverError("linear solver breakdown", std::move(hist));
    alpha = rho / rv;
    for (std::size_t k = 0; k < n; ++k) ws.s[k] = ws.r[k] - alpha * ws.v[k];
    double snorm = std::sqrt(kernels::det_dot(ws.s, ws.s));
    if (snorm <= target) {
      for (std::size_t k = 0; k < n; ++k) x[k] += alpha * ws.y[k];
      return it;
    }
    kernels::sgs_apply(sys, ws.s, ws.z);
    kernels::apply_system(sys, ws.z, ws.t);
    const double tt = kernels::det_dot(ws.t, ws.t);
    if (tt == 0.0) throw SolverError("linear solver breakdown", std::move(hist));
    omega = kernels::det_dot(ws.t, ws.s) / tt;
    for (std::size_t k = 0; k < n; ++k) x[k] += alpha * ws.y[k] + omega * ws.z[k];
    for (std::size_t k = 0; k < n; ++k) ws.r[k] = ws.s[k] - omega * ws.t[k];
    rnorm = std::sqrt(kernels::det_dot(ws.r, ws.r));
    hist.push_back(bnorm > 0.0 ? rnorm / bnorm : rnorm);
    if (rnorm <= target) return it;
  }
  throw SolverError("linear solver did not reach the residual target", std::move(hist));
}

// Window length for the accelerated Picard update: up to kWindow previous
// iterates contribute difference directions.
constexpr int kWindow = 3;

// Cholesky solve of the (regularised, SPD) q x q normal equations, q <=
// kWindow. a is overwritten; the solution replaces b. Returns false when a
// pivot is not positive, i.e. the directions are numerically dependent.
bool cholesky_solve(double a[kWindow][kWindow], double b[kWindow], int q) {
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (int k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        a[i][i] = std::sqrt(s);
      } else {
        a[i][j] = s / a[j][j];
      }
    }
  }
  for (int i = 0; i < q; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= a[i][k] * b[k];
    b[i] = s / a[i][i];
  }
  for (int i = q - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < q; ++k) s -= a[k][i] * b[k];
    b[i] = s / a[i][i];
  }
  return true;
}

}  // namespace

StepStats advance_step(const StructuredGrid& grid, const MaterialModel& mat,
                       const VelocityField& vel, const ParameterSample& bc,
                       const BdfCoefficients& bdf, const SolverOptions& opt, const Field& t_n,
                       const Field& t_nm1, const Field& t_nm2, double time_new, Field& out,
                       SolverWorkspace& ws) {
  StepStats stats;
  std::vector<double> picard_hist;
  // Linear-in-time predictor as the initial iterate (and the linear warm
  // start). On startup steps the history aliases t_n and this collapses to
  // t_n itself.
  out.resize(t_n.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 2.0 * t_n[k] - t_nm1[k];
  // Advective stencil weights for the whole step, from the predictor state:
  // second-order consistent with the new time level, and constant across the
  // Picard iterates (see assemble_system).
  ws.sys.resize(grid.nx, grid.ny);
  kernels::build_advection_coefficients(grid, vel, out, ws.sys.adv);
  ws.aa_x.clear();
  ws.aa_f.clear();
  // The latent-heat spike makes the plain frozen-property iteration orbit the
  // freezing front instead of settling: several front cells flip together, so
  // a scalar relaxation factor is not enough. An Anderson-style combination
  // over a short window of iterates removes those coupled modes.
  for (int it = 0; it < opt.picard_max_iters; ++it) {
    assemble_system(grid, mat, vel, bc, bdf, opt, out, t_n, t_nm1, t_nm2, time_new, ws);
    ws.diff = out;  // previous iterate
    stats.linear_iterations += bicgstab(ws.sys, ws.rhs, out, opt.linear_tol,
                                        opt.linear_max_iters, ws);
    ++stats.picard_iterations;
    double delta = 0.0, scale = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < out.size() && finite; ++k) {
      finite = std::isfinite(out[k]);
      delta = std::max(delta, std::abs(out[k] - ws.diff[k]));
      scale = std::max(scale, std::abs(out[k]));
    }
    if (!finite) {
      throw SolverError("non-finite temperature after linear solve", std::move(picard_hist));
    }
    const double rel = delta / std::max(scale, 1e-12);
    picard_hist.push_back(rel);
    if (rel < opt.picard_tol) return stats;

    // Record the iterate and its raw update f = g(x) - x.
    if (static_cast<int>(ws.aa_x.size()) == kWindow + 1) {
      ws.aa_x.erase(ws.aa_x.begin());
      ws.aa_f.erase(ws.aa_f.begin());
    }
    ws.aa_x.push_back(ws.diff);
    ws.aa_f.emplace_back(out.size());
    Field& fk = ws.aa_f.back();
    for (std::size_t k = 0; k < out.size(); ++k) fk[k] = out[k] - ws.diff[k];

    const int q = static_cast<int>(ws.aa_f.size()) - 1;
    if (q == 0) continue;  // no history yet: plain iterate
    // Least-squares combination: minimise the extrapolated update over the
    // affine hull of the window, via the normal equations on the update
    // differences.
    double gram[kWindow][kWindow];
    double gamma[kWindow];
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < out.size(); ++k) {
          s += (ws.aa_f[i + 1][k] - ws.aa_f[i][k]) * (ws.aa_f[j + 1][k] - ws.aa_f[j][k]);
        }
        gram[i][j] = s;
        gram[j][i] = s;
      }
      double s = 0.0;
      for (std::size_t k = 0; k < out.size(); ++k) {
        s += (ws.aa_f[i + 1][k] - ws.aa_f[i][k]) * fk[k];
      }
      gamma[i] = s;
    }
    double diag_scale = 0.0;
    for (int i = 0; i < q; ++i) diag_scale = std::max(diag_scale, gram[i][i]);
    if (!(diag_scale > 0.0)) continue;
    for (int i = 0; i < q; ++i) gram[i][i] += 1e-13 * diag_scale;
    if (!cholesky_solve(gram, gamma, q)) continue;
    double gmax = 0.0;
    for (int i = 0; i < q; ++i) gmax = std::max(gmax, std::abs(gamma[i]));
    if (gmax > 1e3) continue;  // ill-conditioned window, keep the plain iterate
    for (std::size_t k = 0; k < out.size(); ++k) {
      double corr = 0.0;
      for (int j = 0; j < q; ++j) {
        corr += gamma[j] * ((ws.aa_x[j + 1][k] - ws.aa_x[j][k]) +
                            (ws.aa_f[j + 1][k] - ws.aa_f[j][k]));
      }
      out[k] -= corr;
    }
  }
  throw SolverError("Picard iteration did not converge", std::move(picard_hist));
}

RunResult run_case(const StructuredGrid& grid, const MaterialModel& mat,
                   const ParameterSample& bc, const SolverOptions& opt,
                   const VelocityField& vel) {
  if (!(opt.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (opt.t_final < 0.0) throw std::invalid_argument("t_final must be non-negative");
  if (opt.snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be >= 1");

  RunResult res;
  res.params = bc;
  const int steps = static_cast<int>(std::llround(opt.t_final / opt.dt));
  Field t_n(grid.cell_count(), bc.t_ext);
  Field t_nm1 = t_n, t_nm2 = t_n, t_new;
  SolverWorkspace ws;
  res.snapshots.push_back({0.0, t_n});
  for (int k = 0; k < steps; ++k) {
    const BdfCoefficients bdf = k < 2 ? bdf1() : (k == 2 ? bdf2() : bdf2_opt(opt.chi));
    const StepStats st = advance_step(grid, mat, vel, bc, bdf, opt, t_n, t_nm1, t_nm2,
                                      (k + 1) * opt.dt, t_new, ws);
    res.picard_iterations += st.picard_iterations;
    res.linear_iterations += st.linear_iterations;
    t_nm2.swap(t_nm1);
    t_nm1.swap(t_n);
    t_n.swap(t_new);
    res.steps = k + 1;
    if ((k + 1) % opt.snapshot_stride == 0) {
      res.snapshots.push_back({(k + 1) * opt.dt, t_n});
    }
  }
  return res;
}

RunResult run_case(const StructuredGrid& grid, const MaterialModel& mat,
                   const ParameterSample& bc, const SolverOptions& opt) {
  const StreamFunctionResult flow = build_duct_flow(grid, bc.u_in);
  return run_case(grid, mat, bc, opt, flow.velocity);
}

}  // namespace frost

#include "frost/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "frost/advection.hpp"

namespace frost::kernels {

double det_dot(const double* a, const double* b, std::size_t n) {
  // Fixed 256-way chunking, partials combined in chunk order: the result is
  // bitwise independent of the number of OpenMP threads.
  constexpr int kChunks = 256;
  const std::size_t chunk = (n + kChunks - 1) / kChunks;
  double partial[kChunks];
#pragma omp parallel for schedule(static)
  for (int c = 0; c < kChunks; ++c) {
    const std::size_t lo = std::min(n, static_cast<std::size_t>(c) * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += a[k] * b[k];
    partial[c] = s;
  }
  double total = 0.0;
  for (int c = 0; c < kChunks; ++c) total += partial[c];
  return total;
}

double det_dot_serial(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    m = std::max(m, std::abs(a[k]));
  }
  return m;
}

namespace {

struct FaceState {
  double u = 0.0;
  double alpha = 0.0;
  double t[4] = {0.0, 0.0, 0.0, 0.0};
  bool full = false;    // whole 4-cell stencil in range and fluid
  bool active = false;  // both adjacent cells fluid, u != 0
};

bool fluid_at(const StructuredGrid& g, int i, int j) {
  return g.label(i, j) == CellLabel::Fluid;
}

// Face between cells (i-1,j) and (i,j); caller guarantees 1 <= i <= nx-1.
FaceState x_face_state(const StructuredGrid& g, const VelocityField& vel, const Field& T, int i,
                       int j) {
  FaceState f;
  f.u = vel.u[vel.xf(i, j)];
  if (f.u == 0.0 || !fluid_at(g, i - 1, j) || !fluid_at(g, i, j)) return f;
  f.active = true;
  for (int k = std::max(0, i - 1); k <= std::min(g.nx, i + 1); ++k) {
    f.alpha = std::max(f.alpha, std::abs(vel.u[vel.xf(k, j)]));
  }
  f.full = true;
  for (int s = 0; s < 4; ++s) {
    const int ii = i - 2 + s;
    const bool ok = ii >= 0 && ii < g.nx && fluid_at(g, std::clamp(ii, 0, g.nx - 1), j);
    f.full = f.full && ok;
    f.t[s] = T[g.idx(std::clamp(ii, 0, g.nx - 1), j)];
  }
  return f;
}

// Face between cells (i,j-1) and (i,j); caller guarantees 1 <= j <= ny-1.
FaceState y_face_state(const StructuredGrid& g, const VelocityField& vel, const Field& T, int i,
                       int j) {
  FaceState f;
  f.u = vel.v[vel.yf(i, j)];
  if (f.u == 0.0 || !fluid_at(g, i, j - 1) || !fluid_at(g, i, j)) return f;
  f.active = true;
  for (int k = std::max(0, j - 1); k <= std::min(g.ny, j + 1); ++k) {
    f.alpha = std::max(f.alpha, std::abs(vel.v[vel.yf(i, k)]));
  }
  f.full = true;
  for (int s = 0; s < 4; ++s) {
    const int jj = j - 2 + s;
    const bool ok = jj >= 0 && jj < g.ny && fluid_at(g, i, std::clamp(jj, 0, g.ny - 1));
    f.full = f.full && ok;
    f.t[s] = T[g.idx(i, std::clamp(jj, 0, g.ny - 1))];
  }
  return f;
}

// Linearized Lax-Friedrichs flux with the WENO weights frozen at the state
// the FaceState was built from. Exact at that state, linear around it.
std::array<double, 4> advective_face_coeffs(const FaceState& f) {
  const double cl = 0.5 * (f.u + f.alpha);
  const double cr = 0.5 * (f.u - f.alpha);
  if (!f.full) return {0.0, cl, cr, 0.0};
  const double wl = weno3_weight(f.t[1] - f.t[0], f.t[2] - f.t[1]);
  const double wr = weno3_weight(f.t[2] - f.t[3], f.t[1] - f.t[2]);
  return {cl * (-0.5 * wl), cl * (0.5 + wl) + cr * (0.5 - 0.5 * wr),
          cl * (0.5 - 0.5 * wl) + cr * (0.5 + wr), cr * (-0.5 * wr)};
}

double advective_face_flux_direct(const FaceState& f) {
  if (!f.full) return lax_friedrichs_face_flux(f.u, f.t[1], f.t[2], f.alpha);
  const double pl = weno3_face_value(f.t[0], f.t[1], f.t[2]);
  const double pr = weno3_face_value(f.t[3], f.t[2], f.t[1]);
  return lax_friedrichs_face_flux(f.u, pl, pr, f.alpha);
}

double x_face_flux(const SystemCoeffs& s, const Field& x, int fi, int j) {
  const auto& c = s.adv.x[j * (s.nx + 1) + fi];
  if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0) return 0.0;
  double f = 0.0;
  for (int k = 0; k < 4; ++k) {
    // Clamped reads are safe: truncated stencils carry zero coefficients.
    const int ii = std::clamp(fi - 2 + k, 0, s.nx - 1);
    f += c[k] * x[j * s.nx + ii];
  }
  return f;
}

double y_face_flux(const SystemCoeffs& s, const Field& x, int i, int fj) {
  const auto& c = s.adv.y[fj * s.nx + i];
  if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0) return 0.0;
  double f = 0.0;
  for (int k = 0; k < 4; ++k) {
    const int jj = std::clamp(fj - 2 + k, 0, s.ny - 1);
    f += c[k] * x[jj * s.nx + i];
  }
  return f;
}

}  // namespace

void build_advection_coefficients(const StructuredGrid& grid, const VelocityField& vel,
                                  const Field& T, AdvectionCoeffs& out) {
  const int nx = grid.nx, ny = grid.ny;
  out.x.assign(static_cast<std::size_t>(nx + 1) * ny, std::array<double, 4>{});
  out.y.assign(static_cast<std::size_t>(nx) * (ny + 1), std::array<double, 4>{});
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const FaceState f = x_face_state(grid, vel, T, i, j);
      if (f.active) out.x[vel.xf(i, j)] = advective_face_coeffs(f);
    }
  }
#pragma omp parallel for schedule(static)
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const FaceState f = y_face_state(grid, vel, T, i, j);
      if (f.active) out.y[vel.yf(i, j)] = advective_face_coeffs(f);
    }
  }
}

void advective_divergence_direct(const StructuredGrid& grid, const VelocityField& vel,
                                 const Field& T, double scale_x, double scale_y, Field& out) {
  const int nx = grid.nx, ny = grid.ny;
  out.assign(grid.labels.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const FaceState f = x_face_state(grid, vel, T, i, j);
      if (!f.active) continue;
      const double flux = scale_x * advective_face_flux_direct(f);
      out[grid.idx(i - 1, j)] += flux;
      out[grid.idx(i, j)] -= flux;
    }
  }
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const FaceState f = y_face_state(grid, vel, T, i, j);
      if (!f.active) continue;
      const double flux = scale_y * advective_face_flux_direct(f);
      out[grid.idx(i, j - 1)] += flux;
      out[grid.idx(i, j)] -= flux;
    }
  }
}

void SystemCoeffs::resize(int nx_, int ny_) {
  nx = nx_;
  ny = ny_;
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  local_diag.assign(n, 0.0);
  xtrans.assign(static_cast<std::size_t>(nx + 1) * ny, 0.0);
  ytrans.assign(static_cast<std::size_t>(nx) * (ny + 1), 0.0);
  adv.x.assign(static_cast<std::size_t>(nx + 1) * ny, std::array<double, 4>{});
  adv.y.assign(static_cast<std::size_t>(nx) * (ny + 1), std::array<double, 4>{});
  jacobi.assign(n, 1.0);
}

void apply_system(const SystemCoeffs& s, const Field& x, Field& out) {
  const int nx = s.nx, ny = s.ny;
  out.resize(x.size());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = j * nx + i;
      double v = s.local_diag[c] * x[c];
      const double gw = s.xtrans[j * (nx + 1) + i];
      const double ge = s.xtrans[j * (nx + 1) + i + 1];
      // Boundary faces always carry zero conductance, so the guarded
      // neighbour reads stay in range.
      if (gw != 0.0) v += gw * (x[c] - x[c - 1]);
      if (ge != 0.0) v += ge * (x[c] - x[c + 1]);
      const double gs = s.ytrans[j * nx + i];
      const double gn = s.ytrans[(j + 1) * nx + i];
      if (gs != 0.0) v += gs * (x[c] - x[c - nx]);
      if (gn != 0.0) v += gn * (x[c] - x[c + nx]);
      v += s.adv_scale_x * (x_face_flux(s, x, i + 1, j) - x_face_flux(s, x, i, j));
      v += s.adv_scale_y * (y_face_flux(s, x, i, j + 1) - y_face_flux(s, x, i, j));
      out[c] = v;
    }
  }
}

void apply_system_serial(const SystemCoeffs& s, const Field& x, Field& out) {
  const int nx = s.nx, ny = s.ny;
  out.resize(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) out[c] = s.local_diag[c] * x[c];
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const int L = j * nx + i - 1;
      const int R = L + 1;
      const double g = s.xtrans[j * (nx + 1) + i];
      if (g != 0.0) {
        out[L] += g * (x[L] - x[R]);
        out[R] += g * (x[R] - x[L]);
      }
      const double f = x_face_flux(s, x, i, j);
      if (f != 0.0) {
        out[L] += s.adv_scale_x * f;
        out[R] -= s.adv_scale_x * f;
      }
    }
  }
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int D = (j - 1) * nx + i;
      const int U = D + nx;
      const double g = s.ytrans[j * nx + i];
      if (g != 0.0) {
        out[D] += g * (x[D] - x[U]);
        out[U] += g * (x[U] - x[D]);
      }
      const double f = y_face_flux(s, x, i, j);
      if (f != 0.0) {
        out[D] += s.adv_scale_y * f;
        out[U] -= s.adv_scale_y * f;
      }
    }
  }
}

namespace {

// Nearest-neighbour couplings of the full operator row at cell (i, j):
// diffusive conductance plus the adjacent-cell part of the advective face
// stencils. The far entries of the 4-point stencils stay outside the
// preconditioner splitting.
inline double coupling_west(const SystemCoeffs& s, int i, int j) {
  const int f = j * (s.nx + 1) + i;
  return -s.xtrans[f] + s.adv_scale_x * (s.adv.x[f + 1][0] - s.adv.x[f][1]);
}
inline double coupling_east(const SystemCoeffs& s, int i, int j) {
  const int f = j * (s.nx + 1) + i;
  return -s.xtrans[f + 1] + s.adv_scale_x * (s.adv.x[f + 1][2] - s.adv.x[f][3]);
}
inline double coupling_south(const SystemCoeffs& s, int i, int j) {
  const int f = j * s.nx + i;
  return -s.ytrans[f] + s.adv_scale_y * (s.adv.y[f + s.nx][0] - s.adv.y[f][1]);
}
inline double coupling_north(const SystemCoeffs& s, int i, int j) {
  const int f = j * s.nx + i;
  return -s.ytrans[f + s.nx] + s.adv_scale_y * (s.adv.y[f + s.nx][2] - s.adv.y[f][3]);
}

}  // namespace

void sgs_apply(const SystemCoeffs& s, const Field& r, Field& z) {
  const int nx = s.nx, ny = s.ny;
  z.resize(r.size());
  // Forward sweep: (D + L) w = r, w stored in z.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c = j * nx + i;
      double acc = r[c];
      if (i > 0) acc -= coupling_west(s, i, j) * z[c - 1];
      if (j > 0) acc -= coupling_south(s, i, j) * z[c - nx];
      z[c] = acc / s.jacobi[c];
    }
  }
  // Backward sweep: (D + U) z = D w.
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = nx - 1; i >= 0; --i) {
      const int c = j * nx + i;
      double acc = 0.0;
      if (i + 1 < nx) acc += coupling_east(s, i, j) * z[c + 1];
      if (j + 1 < ny) acc += coupling_north(s, i, j) * z[c + nx];
      z[c] -= acc / s.jacobi[c];
    }
  }
}

}  // namespace frost::kernels

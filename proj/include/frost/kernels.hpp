#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "frost/geometry.hpp"

namespace frost {

using Field = std::vector<double>;

struct VelocityField {
  int nx = 0, ny = 0;
  std::vector<double> u;  // (nx+1)*ny face-normal x-velocities
  std::vector<double> v;  // nx*(ny+1) face-normal y-velocities
  double inlet_flux = 0.0;

  int xf(int i, int j) const { return j * (nx + 1) + i; }
  int yf(int i, int j) const { return j * nx + i; }

  static VelocityField zero(const StructuredGrid& g) {
    VelocityField f;
    f.nx = g.nx;
    f.ny = g.ny;
    f.u.assign((g.nx + 1) * g.ny, 0.0);
    f.v.assign(g.nx * (g.ny + 1), 0.0);
    return f;
  }
};

/// Hot loops of the implicit step. Each OpenMP kernel has a serial reference
/// written in an independent formulation (plain accumulation, scatter-form
/// assembly, direct nonlinear flux evaluation); the test suite asserts
/// agreement and the benchmark tool compares their runtimes.
namespace kernels {

/// Deterministic dot product: fixed 256-chunk partial sums combined in chunk
/// order, so the result is independent of the number of threads.
double det_dot(const double* a, const double* b, std::size_t n);
/// Reference: single left-to-right accumulation.
double det_dot_serial(const double* a, const double* b, std::size_t n);
inline double det_dot(const Field& a, const Field& b) { return det_dot(a.data(), b.data(), a.size()); }
inline double det_dot_serial(const Field& a, const Field& b) {
  return det_dot_serial(a.data(), b.data(), a.size());
}

double max_abs(const double* a, std::size_t n);
inline double max_abs(const Field& a) { return max_abs(a.data(), a.size()); }

/// Per-face linear coefficients of the Lax-Friedrichs flux with WENO3
/// reconstructions whose weights are frozen at the given temperature field.
/// For the x-face at column i of row j the stencil is cells (i-2..i+1, j);
/// y-faces mirror this in j. Coefficients are per unit area and per unit
/// volumetric heat capacity; inactive faces hold zeros. Faces whose 4-cell
/// stencil leaves the fluid region fall back to first-order upwind.
struct AdvectionCoeffs {
  std::vector<std::array<double, 4>> x;  // (nx+1)*ny
  std::vector<std::array<double, 4>> y;  // nx*(ny+1)
};

void build_advection_coefficients(const StructuredGrid& grid, const VelocityField& vel,
                                  const Field& T, AdvectionCoeffs& out);

/// Reference: evaluates the nonlinear WENO3/Lax-Friedrichs divergence of T
/// directly (per unit area and heat capacity, times face length over cell
/// area folded in by the caller). Writes the net outflux per cell, scaled by
/// scale_x for x-faces and scale_y for y-faces. Equals the advective part of
/// apply_system when the coefficients were frozen at the same T.
void advective_divergence_direct(const StructuredGrid& grid, const VelocityField& vel,
                                 const Field& T, double scale_x, double scale_y, Field& out);

/// Matrix-free implicit-step operator: cell-local terms, diffusive
/// conductances, and the frozen-weight advective fluxes.
struct SystemCoeffs {
  int nx = 0, ny = 0;
  double adv_scale_x = 0.0;  // rho_cp_fluid * dy
  double adv_scale_y = 0.0;  // rho_cp_fluid * dx
  std::vector<double> local_diag;      // mass + Robin + outflow terms
  std::vector<double> xtrans, ytrans;  // diffusive conductance per face, W/K
  AdvectionCoeffs adv;
  std::vector<double> jacobi;          // effective diagonal, for preconditioning

  void resize(int nx_, int ny_);
};

/// Gather form, one writer per cell, OpenMP over rows.
void apply_system(const SystemCoeffs& s, const Field& x, Field& out);
/// Reference: scatter form, accumulating both sides of each face.
void apply_system_serial(const SystemCoeffs& s, const Field& x, Field& out);

/// z = M^-1 r for the symmetric Gauss-Seidel splitting of the diffusive
/// skeleton: M = (D - L) D^-1 (D - U) with D the effective diagonal and
/// L/U the transmissibility couplings. The advective stencil stays outside
/// the splitting. Serial sweeps by construction; deterministic.
void sgs_apply(const SystemCoeffs& s, const Field& r, Field& z);

}  // namespace kernels
}  // namespace frost

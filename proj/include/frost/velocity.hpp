#pragma once

#include <vector>

#include "frost/geometry.hpp"
#include "frost/kernels.hpp"

namespace frost {

/// Prescribed cabinet airflow built from a node-based stream function, so
/// the staggered face velocities are divergence-free by construction. The
/// duct wall carries a linear psi ramp across the inlet span (flux
/// u_in * H_in), a constant along the adiabatic middle run, and a matching
/// ramp across the outlet; every other wall holds psi = 0. Solid cells enter
/// as a constant-psi obstacle whose value is the mean of an obstacle-free
/// solve over the obstacle footprint.
struct StreamFunctionResult {
  VelocityField velocity;
  std::vector<double> psi;  // (nx+1)*(ny+1) node values, row-major
  double obstacle_psi = 0.0;
  int cg_iterations_first = 0;
  int cg_iterations_second = 0;
};

/// Throws std::runtime_error when some fluid cell is not 4-connected to the
/// inlet, or when the Laplace solve fails to converge. u_in = 0 yields an
/// exactly zero field.
StreamFunctionResult build_duct_flow(const StructuredGrid& grid, double u_in);

/// BFS from the inlet-adjacent fluid cells; throws std::runtime_error when
/// any fluid cell is unreachable.
void check_fluid_connectivity(const StructuredGrid& grid);

/// Largest cell-wise net volume flux imbalance, m^2/s per unit depth.
double max_divergence(const StructuredGrid& grid, const VelocityField& vel);

}  // namespace frost

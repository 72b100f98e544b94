#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frost/geometry.hpp"
#include "frost/kernels.hpp"
#include "frost/materials.hpp"
#include "frost/timestepping.hpp"

namespace frost {

/// Boundary-condition draw for one forward run.
struct ParameterSample {
  double u_in = 0.2;     // inlet speed, m/s
  double t_cold = -22.0; // inlet air temperature, degC
  double t_ext = 22.0;   // exterior ambient, degC
  double h_ext = 0.8;    // exterior film coefficient, W/m^2/K
};

/// Deterministic uniform draws, identical across platforms: each value is
/// built from the top 53 bits of one mt19937_64 output, components in the
/// order u_in, t_cold, t_ext, h_ext.
std::vector<ParameterSample> sample_parameters(int count, std::uint64_t seed);

struct SolverOptions {
  double dt = 2.0;
  double t_final = 7200.0;
  int snapshot_stride = 36;
  double chi = 0.52;           // BDF2/BDF3 blend
  double picard_tol = 1e-6;    // max relative change between iterates
  int picard_max_iters = 50;
  double linear_tol = 1e-10;   // relative residual
  int linear_max_iters = 1000;
  double rho_c_floor = 1e5;    // keeps the tabulated food heat capacity positive
  /// Half-width (K) of the windowed average the solver applies when sampling
  /// the food property tables, i.e. the capacity becomes the centred
  /// enthalpy secant [H(T+d) - H(T-d)] / 2d. The published piecewise fits
  /// are rounded, so their segments do not quite meet at the breakpoints
  /// (the capacity even dips negative just below 0 degC); a cell that
  /// settles on a breakpoint then sees a bistable property and the Picard
  /// loop cannot converge. The window bridges those rounding artifacts and
  /// is inert elsewhere. Zero samples the tables pointwise.
  double property_smoothing = 0.25;
  double wall_lambda = 0.026;  // cabinet wall insulation
  double wall_thickness = 0.05;
  bool shelf_conducting = true;  // false decouples shelf cells from the solve
  /// Optional volumetric source, W/m^3 at (x, y, t); used by verification
  /// problems with manufactured solutions.
  std::function<double(double, double, double)> source;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  /// Per-iteration residuals of the loop that failed.
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

struct StepStats {
  int picard_iterations = 0;
  int linear_iterations = 0;
};

/// Scratch buffers reused across steps.
struct SolverWorkspace {
  kernels::SystemCoeffs sys;
  Field rhs;
  Field lambda_cell;
  Field r, rhat, p, v, s, t, y, z, diff;
  // Trailing window of Picard iterates and their updates, for acceleration.
  std::vector<Field> aa_x, aa_f;
};

/// One implicit step of the conjugate energy equation, frozen-coefficient
/// Picard outer loop around a preconditioned BiCGSTAB solve. History
/// fields t_nm1/t_nm2 may alias t_n when the BDF formula does not use them.
/// Throws SolverError on Picard or linear-solver failure and on non-finite
/// iterates.
StepStats advance_step(const StructuredGrid& grid, const MaterialModel& mat,
                       const VelocityField& vel, const ParameterSample& bc,
                       const BdfCoefficients& bdf, const SolverOptions& opt, const Field& t_n,
                       const Field& t_nm1, const Field& t_nm2, double time_new, Field& out,
                       SolverWorkspace& ws);

struct Snapshot {
  double time = 0.0;
  Field temperature;
};

struct RunResult {
  ParameterSample params;
  std::vector<Snapshot> snapshots;
  int steps = 0;
  long picard_iterations = 0;
  long linear_iterations = 0;
};

/// Full transient from thermal equilibrium with the exterior (T = t_ext
/// everywhere): builds the duct flow for bc.u_in, cold-starts BDF1, BDF1,
/// BDF2, then runs BDF2-opt. States at steps divisible by snapshot_stride
/// are recorded, the initial state included.
RunResult run_case(const StructuredGrid& grid, const MaterialModel& mat,
                   const ParameterSample& bc, const SolverOptions& opt);

/// run_case over a velocity field supplied by the caller instead of the
/// built duct flow; verification problems use this with a zero field.
RunResult run_case(const StructuredGrid& grid, const MaterialModel& mat,
                   const ParameterSample& bc, const SolverOptions& opt,
                   const VelocityField& vel);

}  // namespace frost

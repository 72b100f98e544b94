#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <vector>

#include "frost/geometry.hpp"

namespace frost {

/// Temperature-dependent property given by cubic polynomials on contiguous
/// intervals. The first interval is closed on both ends, the rest are
/// right-closed: [e0, e1], (e1, e2], ... Evaluation outside [e0, eN] clamps
/// the argument and increments clamp_count.
struct PiecewiseCubicProperty {
  std::vector<double> edges;                   // interval breakpoints, ascending
  std::vector<std::array<double, 4>> coef;     // a0..a3 per interval
  mutable std::atomic<std::uint64_t> clamp_count{0};

  PiecewiseCubicProperty() = default;
  PiecewiseCubicProperty(std::vector<double> e, std::vector<std::array<double, 4>> c)
      : edges(std::move(e)), coef(std::move(c)) {}
  PiecewiseCubicProperty(const PiecewiseCubicProperty& o)
      : edges(o.edges), coef(o.coef), clamp_count(o.clamp_count.load()) {}
  PiecewiseCubicProperty& operator=(const PiecewiseCubicProperty& o) {
    edges = o.edges;
    coef = o.coef;
    clamp_count.store(o.clamp_count.load());
    return *this;
  }

  void validate() const;
};

/// Evaluates the cubic of the interval containing T (NaN throws).
double eval_property(const PiecewiseCubicProperty& prop, double T);

/// Exact integral of the property over [a, b]; antisymmetric in the limits.
/// Outside the table the clamped end value extends as a constant, and each
/// out-of-range limit bumps clamp_count once, like eval_property.
double integrate_property(const PiecewiseCubicProperty& prop, double a, double b);

struct AirProperties {
  double rho = 1.292;     // kg m^-3
  double cp = 1006.0;     // J kg^-1 K^-1
  double lambda = 0.0243; // W m^-1 K^-1
  double rho_cp() const { return rho * cp; }
};

struct ShelfProperties {
  double lambda = 1.0;      // W m^-1 K^-1
  double rho_cp = 1.68e6;   // J m^-3 K^-1
};

enum class LiquidFractionMode { Linear, Enthalpy };

/// Property dispatch for the conjugate domain: tabulated food, constant air
/// with an effective-conductivity turbulence surrogate, constant shelf.
struct MaterialModel {
  PiecewiseCubicProperty food_rho_c;   // volumetric heat capacity, J m^-3 K^-1
  PiecewiseCubicProperty food_lambda;  // conductivity, W m^-1 K^-1
  AirProperties air;
  ShelfProperties shelf;
  double turbulence_multiplier = 10.0;  // lambda_eff = lambda_air * (1 + multiplier)
  LiquidFractionMode liquid_fraction_mode = LiquidFractionMode::Linear;
  double t_solidus = -5.0;
  double t_liquidus = 0.0;

  double volumetric_heat_capacity(CellLabel label, double T) const;
  /// Integral of the volumetric heat capacity from a to b, i.e. the
  /// volumetric enthalpy difference H(b) - H(a).
  double enthalpy_delta(CellLabel label, double a, double b) const;
  double conductivity(CellLabel label, double T) const;
  double fluid_lambda_eff() const { return air.lambda * (1.0 + turbulence_multiplier); }

  /// Frozen-to-thawed mass fraction in [0, 1]; see LiquidFractionMode.
  double liquid_fraction(double T) const;

  /// Food property tables for salmon fillets.
  static MaterialModel salmon_defaults();

private:
  // Enthalpy-mode normalisation table over [t_solidus, t_liquidus].
  mutable std::vector<double> enthalpy_table_;
  void build_enthalpy_table() const;
};

}  // namespace frost

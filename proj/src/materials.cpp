#include "frost/materials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frost {

void PiecewiseCubicProperty::validate() const {
  if (edges.size() < 2) throw std::invalid_argument("property needs at least one interval");
  if (coef.size() + 1 != edges.size())
    throw std::invalid_argument("property intervals and coefficient rows disagree");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw std::invalid_argument("property breakpoints must ascend");
}

double eval_property(const PiecewiseCubicProperty& prop, double T) {
  if (std::isnan(T)) throw std::invalid_argument("property evaluated at NaN");
  double t = T;
  if (t < prop.edges.front()) {
    t = prop.edges.front();
    prop.clamp_count.fetch_add(1, std::memory_order_relaxed);
  } else if (t > prop.edges.back()) {
    t = prop.edges.back();
    prop.clamp_count.fetch_add(1, std::memory_order_relaxed);
  }
  // Right-closed intervals: (e_k, e_{k+1}]; the first is closed at e_0.
  std::size_t k = 0;
  while (k + 2 < prop.edges.size() && t > prop.edges[k + 1]) ++k;
  const auto& a = prop.coef[k];
  return a[0] + t * (a[1] + t * (a[2] + t * a[3]));
}

double integrate_property(const PiecewiseCubicProperty& prop, double a, double b) {
  if (std::isnan(a) || std::isnan(b))
    throw std::invalid_argument("property integrated over NaN limit");
  if (a == b) return 0.0;
  double lo = a, hi = b, sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }
  const double e0 = prop.edges.front(), en = prop.edges.back();
  double total = 0.0;
  if (lo < e0) {
    total += eval_property(prop, e0) * (std::min(hi, e0) - lo);
    prop.clamp_count.fetch_add(1, std::memory_order_relaxed);
  }
  if (hi > en) {
    total += eval_property(prop, en) * (hi - std::max(lo, en));
    prop.clamp_count.fetch_add(1, std::memory_order_relaxed);
  }
  const double s = std::max(lo, e0), t = std::min(hi, en);
  for (std::size_t k = 0; t > s && k + 1 < prop.edges.size(); ++k) {
    const double ia = std::max(s, prop.edges[k]);
    const double ib = std::min(t, prop.edges[k + 1]);
    if (ib <= ia) continue;
    const auto& c = prop.coef[k];
    const auto anti = [&c](double x) {
      return x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * (c[3] / 4.0))));
    };
    total += anti(ib) - anti(ia);
  }
  return sign * total;
}

double MaterialModel::volumetric_heat_capacity(CellLabel label, double T) const {
  switch (label) {
    case CellLabel::Food: return eval_property(food_rho_c, T);
    case CellLabel::Shelf: return shelf.rho_cp;
    case CellLabel::Fluid: default: return air.rho_cp();
  }
}

double MaterialModel::enthalpy_delta(CellLabel label, double a, double b) const {
  switch (label) {
    case CellLabel::Food: return integrate_property(food_rho_c, a, b);
    case CellLabel::Shelf: return shelf.rho_cp * (b - a);
    case CellLabel::Fluid: default: return air.rho_cp() * (b - a);
  }
}

double MaterialModel::conductivity(CellLabel label, double T) const {
  switch (label) {
    case CellLabel::Food: return eval_property(food_lambda, T);
    case CellLabel::Shelf: return shelf.lambda;
    case CellLabel::Fluid: default: return fluid_lambda_eff();
  }
}

void MaterialModel::build_enthalpy_table() const {
  // Cumulative positive excess of rho_c over the sensible chord between the
  // solidus and liquidus values, on a fixed fine partition. The table is
  // monotone by construction, so the fraction it induces is monotone too.
  constexpr int kNodes = 1001;
  const double lo = t_solidus, hi = t_liquidus;
  const double rc_lo = eval_property(food_rho_c, lo);
  const double rc_hi = eval_property(food_rho_c, hi);
  const auto chord = [&](double T) { return rc_lo + (rc_hi - rc_lo) * (T - lo) / (hi - lo); };
  const auto excess = [&](double T) { return std::max(eval_property(food_rho_c, T) - chord(T), 0.0); };

  enthalpy_table_.assign(kNodes, 0.0);
  const double h = (hi - lo) / (kNodes - 1);
  for (int k = 1; k < kNodes; ++k) {
    const double a = lo + (k - 1) * h, b = lo + k * h;
    const double mid = 0.5 * (a + b);
    enthalpy_table_[k] = enthalpy_table_[k - 1] + h / 6.0 * (excess(a) + 4.0 * excess(mid) + excess(b));
  }
}

double MaterialModel::liquid_fraction(double T) const {
  if (std::isnan(T)) throw std::invalid_argument("liquid fraction evaluated at NaN");
  if (T <= t_solidus) return 0.0;
  if (T >= t_liquidus) return 1.0;
  if (liquid_fraction_mode == LiquidFractionMode::Linear)
    return (T - t_solidus) / (t_liquidus - t_solidus);

  if (enthalpy_table_.empty()) build_enthalpy_table();
  const int n = static_cast<int>(enthalpy_table_.size());
  const double pos = (T - t_solidus) / (t_liquidus - t_solidus) * (n - 1);
  const int k = std::min(static_cast<int>(pos), n - 2);
  const double f = pos - k;
  const double total = enthalpy_table_.back();
  if (total <= 0.0) return (T - t_solidus) / (t_liquidus - t_solidus);
  const double v = enthalpy_table_[k] + f * (enthalpy_table_[k + 1] - enthalpy_table_[k]);
  return std::clamp(v / total, 0.0, 1.0);
}

MaterialModel MaterialModel::salmon_defaults() {
  MaterialModel m;
  const std::vector<double> edges{-25.0, -5.0, -3.5, 0.0, 25.0};
  m.food_rho_c = PiecewiseCubicProperty(
      edges,
      {{{4.298e7, 7.166e6, 4.199e5, 8.031e3}},
       {{3.046e10, 1.906e10, 4.002e9, 2.817e8}},
       {{-4.604e6, -1.037e8, -1.095e8, -4.260e7}},
       {{4.365e6, -3.228e5, 2.535e4, -5.838e2}}});
  m.food_lambda = PiecewiseCubicProperty(
      edges,
      {{{5.654e-1, -9.014e-2, -4.038e-3, -6.721e-5}},
       {{-3.276e-1, -5.611e-1, -9.160e-2, -5.767e-3}},
       {{5.202e-1, 1.181e-2, 2.707e-2, 1.081e-3}},
       {{5.122e-1, -3.900e-3, 3.585e-4, -7.767e-6}}});
  m.food_rho_c.validate();
  m.food_lambda.validate();
  return m;
}

}  // namespace frost

#pragma once

#include <stdexcept>

namespace frost {

/// Backward-difference coefficients for
///   d(phi)/dt ~ (c1*phi^{n+1} + c2*phi^n + c3*phi^{n-1} + c4*phi^{n-2}) / dt.
/// `history` is the number of old time levels the formula touches.
struct BdfCoefficients {
  double c1, c2, c3, c4;
  int history;
};

inline BdfCoefficients bdf1() { return {1.0, -1.0, 0.0, 0.0, 1}; }
inline BdfCoefficients bdf2() { return {1.5, -2.0, 0.5, 0.0, 2}; }

/// Blend chi*BDF2 + (1-chi)*BDF3. chi outside [0, 1] throws.
inline BdfCoefficients bdf2_opt(double chi) {
  if (!(chi >= 0.0 && chi <= 1.0)) throw std::invalid_argument("bdf2_opt blend factor must be in [0, 1]");
  const double om = 1.0 - chi;
  BdfCoefficients c{
      chi * 1.5 + om * (11.0 / 6.0),
      chi * -2.0 + om * -3.0,
      chi * 0.5 + om * 1.5,
      om * (-1.0 / 3.0),
      0};
  c.history = (c.c4 != 0.0) ? 3 : 2;
  return c;
}

}  // namespace frost

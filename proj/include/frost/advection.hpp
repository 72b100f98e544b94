#pragma once

namespace frost {

/// Nonlinear weight of the left-biased candidate stencil in the third-order
/// WENO reconstruction, from the two neighbouring slopes. Smooth data gives
/// w0 -> 1/3; a kink in d0 drives w0 -> 0.
inline double weno3_weight(double d0, double d1) {
  constexpr double eps = 1e-6;
  const double b0 = d0 * d0;
  const double b1 = d1 * d1;
  const double a0 = (1.0 / 3.0) / ((b0 + eps) * (b0 + eps));
  const double a1 = (2.0 / 3.0) / ((b1 + eps) * (b1 + eps));
  return a0 / (a0 + a1);
}

/// Third-order WENO value at the face between cells 0 and p, biased to the
/// (m, 0) side. Written in increment form so a constant stencil reproduces
/// phi_0 bitwise.
inline double weno3_face_value(double phi_m, double phi_0, double phi_p) {
  const double d0 = phi_0 - phi_m;
  const double d1 = phi_p - phi_0;
  const double w0 = weno3_weight(d0, d1);
  const double s0 = phi_0 + 0.5 * d0;  // one-sided extrapolation
  const double s1 = phi_0 + 0.5 * d1;  // centred interpolation
  return s1 + w0 * (s0 - s1);
}

/// Local Lax-Friedrichs numerical flux for transport at face velocity u,
/// with dissipation speed alpha >= |u|.
inline double lax_friedrichs_face_flux(double u, double phi_left, double phi_right, double alpha) {
  return 0.5 * (u * (phi_left + phi_right) - alpha * (phi_right - phi_left));
}

}  // namespace frost

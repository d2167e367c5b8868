#pragma once

// Small-separation expansion of the Smith equation CRB(delta) = delta^2.
//
// First-order expansions around delta = 0:
//   eta(delta)  ~ P  + delta Q,   P  = Re{h v},  Q  = -Im{h r}
//   zeta(delta) ~ P' + delta Q',  P' = Re{h u},  Q' = -Im{h v}
// turn the Schur complement entries into polynomials
//   P2(delta) = a2 delta^2 + a1 delta + a0
//   P1(delta) = alpha1 delta + alpha0
// so that CRB(delta) ~ Qn(delta) / Qd(delta) with
//   Qd(delta) = beta P2 - P1^2
//   Qn(delta) = (sigma2/2)(beta + P2 + 2 P1) = c2 delta^2 + c1 delta + c0.
// Multiplying out Qd(x) x^2 - Qn(x) and normalizing by its leading
// coefficient gives the monic quartic x^4 + g3 x^3 + g2 x^2 + g1 x + g0.

#include <array>

#include "arlkit/array_model.hpp"

namespace arlkit {

/// u = sum l^2 e^{i phi l^2}, v = sum l^3 e^{i phi l^2}, r = sum l^4 e^{i phi l^2}.
struct PhiSums {
  cplx u;
  cplx v;
  cplx r;
};

PhiSums phi_sums(double phi, int num_sensors);

struct LinearCoeffs {
  double P = 0.0, Q = 0.0, Pp = 0.0, Qp = 0.0;
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double alpha0 = 0.0, alpha1 = 0.0;
  double beta = 0.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double g0 = 0.0, g1 = 0.0, g2 = 0.0, g3 = 0.0;
  double sigma2 = 0.0;

  /// beta a2 - alpha1^2: leading coefficient of Qd(x) x^2 - Qn(x).
  double lead() const { return beta * a2 - alpha1 * alpha1; }
  /// beta a1 - 2 alpha0 alpha1.
  double cubic() const { return beta * a1 - 2.0 * alpha0 * alpha1; }
  /// beta a0 - alpha0^2, i.e. Qd(0).
  double qd0() const { return beta * a0 - alpha0 * alpha0; }
  /// beta a0 - alpha0^2 - c2: the linear coefficient of the reduced quadratic.
  double reduced_mid() const { return qd0() - c2; }

  /// g0..g3 in ascending order.
  std::array<double, 4> monic() const { return {g0, g1, g2, g3}; }
};

/// Throws kDegenerateQuartic when |beta a2 - alpha1^2| is below
/// 1e-14 max(|beta a2|, alpha1^2, 1).
LinearCoeffs linear_coeffs(int num_sensors, double phi,
                           const SignalStats& stats, double sigma2);
LinearCoeffs linear_coeffs(const Scenario& scenario);

/// Recomputes the sigma2-dependent fields (c and g) for another noise level.
LinearCoeffs with_sigma2(const LinearCoeffs& coeffs, double sigma2);

/// Qd(delta) = (beta a2 - alpha1^2) delta^2 + (beta a1 - 2 alpha0 alpha1) delta
///             + beta a0 - alpha0^2.
double q_poly(const LinearCoeffs& coeffs, double delta);

/// Qn(delta) = c2 delta^2 + c1 delta + c0.
double q_prime_poly(const LinearCoeffs& coeffs, double delta);

/// Linearized CRBs: (sigma2/2) beta/Qd, (sigma2/2) P2/Qd, -(sigma2/2) P1/Qd.
struct LinearizedCrb {
  double crb_omega1 = 0.0;
  double crb_omega2 = 0.0;
  double crb_cross = 0.0;
  double crb_delta = 0.0;  // Qn / Qd
};

LinearizedCrb linearized_crb(const LinearCoeffs& coeffs, double delta);

}  // namespace arlkit

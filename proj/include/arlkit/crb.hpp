#pragma once

// Closed-form Cramer-Rao bounds for (omega1, omega2) after eliminating phi.
//
//   beta  = ||s2||^2 (L2 - L3^2/L4)
//   P2    = L2 ||s1||^2 - eta^2 / (L4 ||s2||^2)
//   P1    = zeta - eta L3/L4
//   Qdet  = beta P2 - P1^2
//   CRB(omega1) = (sigma2/2) beta / Qdet
//   CRB(omega2) = (sigma2/2) P2 / Qdet
//   CRB(omega1, omega2) = -(sigma2/2) P1 / Qdet
//
// with zeta(delta) = Re{h sum l^2 e^{i(delta l + phi l^2)}} and
// eta(delta) = Re{h sum l^3 e^{i(delta l + phi l^2)}}.

#include <array>

#include "arlkit/array_model.hpp"

namespace arlkit {

/// moment[r] = sum_{l=0}^{L-1} l^r for r = 0..4.
using Moments = std::array<double, 5>;

Moments moment_sums(int num_sensors);

struct SpectralSums {
  Moments moment{};
  double zeta = 0.0;
  double eta = 0.0;
  cplx h;
};

SpectralSums spectral_sums(int num_sensors, const ElectricalParams& e, cplx h);
SpectralSums spectral_sums(const Scenario& scenario);

struct CrbSet {
  double crb_omega1 = 0.0;
  double crb_omega2 = 0.0;
  double crb_cross = 0.0;
  double crb_delta = 0.0;  // crb_omega1 + crb_omega2 - 2 crb_cross
  double beta = 0.0;
  double q_det = 0.0;
};

/// Throws kDegenerateQ when the Schur determinant vanishes.
CrbSet crb_closed_form(int num_sensors, const ElectricalParams& e,
                       const SignalStats& stats, double sigma2);
CrbSet crb_closed_form(const Scenario& scenario);

double crb_delta(int num_sensors, const ElectricalParams& e,
                 const SignalStats& stats, double sigma2);
double crb_delta(const Scenario& scenario);

}  // namespace arlkit

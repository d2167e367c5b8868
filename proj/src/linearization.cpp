#include "arlkit/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"

namespace arlkit {

PhiSums phi_sums(double phi, int num_sensors) {
  PhiSums out;
  for (int l = 0; l < num_sensors; ++l) {
    const double l2 = double(l) * l;
    const cplx ph = std::polar(1.0, phi * l2);
    out.u += l2 * ph;
    out.v += l2 * l * ph;
    out.r += l2 * l2 * ph;
  }
  return out;
}

namespace {

void fill_noise_terms(LinearCoeffs& k, double sigma2) {
  const double lead = k.lead();
  const double tol = 1e-14 * std::max({std::abs(k.beta * k.a2),
                                       k.alpha1 * k.alpha1, 1.0});
  if (!(std::abs(lead) >= tol)) {
    std::ostringstream msg;
    msg << "degenerate quartic: beta*a2 - alpha1^2 = " << lead;
    throw Error(ErrorCode::kDegenerateQuartic, msg.str());
  }
  const double half = 0.5 * sigma2;
  k.sigma2 = sigma2;
  k.c2 = half * k.a2;
  k.c1 = half * (k.a1 + 2.0 * k.alpha1);
  k.c0 = half * (k.beta + k.a0 + 2.0 * k.alpha0);
  k.g0 = -k.c0 / lead;
  k.g1 = -k.c1 / lead;
  k.g2 = k.reduced_mid() / lead;
  k.g3 = k.cubic() / lead;
}

}  // namespace

LinearCoeffs linear_coeffs(int num_sensors, double phi,
                           const SignalStats& stats, double sigma2) {
  const Moments m = moment_sums(num_sensors);
  const double L2 = m[2], L3 = m[3], L4 = m[4];
  const PhiSums ps = phi_sums(phi, num_sensors);
  const cplx h = stats.cross;

  LinearCoeffs k;
  k.P = (h * ps.v).real();
  k.Q = -(h * ps.r).imag();
  k.Pp = (h * ps.u).real();
  k.Qp = -(h * ps.v).imag();

  const double w = L4 * stats.energy2;
  k.a2 = -k.Q * k.Q / w;
  k.a1 = -2.0 * k.P * k.Q / w;
  k.a0 = L2 * stats.energy1 - k.P * k.P / w;
  k.alpha1 = k.Qp - L3 / L4 * k.Q;
  k.alpha0 = k.Pp - L3 / L4 * k.P;
  k.beta = stats.energy2 * (L2 - L3 * L3 / L4);

  fill_noise_terms(k, sigma2);
  return k;
}

LinearCoeffs linear_coeffs(const Scenario& scenario) {
  scenario.validate();
  return linear_coeffs(scenario.geometry.num_sensors, scenario.electrical.phi,
                       scenario.signals.stats(), scenario.sigma2);
}

LinearCoeffs with_sigma2(const LinearCoeffs& coeffs, double sigma2) {
  LinearCoeffs out = coeffs;
  fill_noise_terms(out, sigma2);
  return out;
}

double q_poly(const LinearCoeffs& k, double delta) {
  return (k.lead() * delta + k.cubic()) * delta + k.qd0();
}

double q_prime_poly(const LinearCoeffs& k, double delta) {
  return (k.c2 * delta + k.c1) * delta + k.c0;
}

LinearizedCrb linearized_crb(const LinearCoeffs& k, double delta) {
  const double qd = q_poly(k, delta);
  const double half = 0.5 * k.sigma2;
  const double p2 = (k.a2 * delta + k.a1) * delta + k.a0;
  const double p1 = k.alpha1 * delta + k.alpha0;
  LinearizedCrb out;
  out.crb_omega1 = half * k.beta / qd;
  out.crb_omega2 = half * p2 / qd;
  out.crb_cross = -half * p1 / qd;
  out.crb_delta = q_prime_poly(k, delta) / qd;
  return out;
}

}  // namespace arlkit

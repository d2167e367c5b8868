#include "arlkit/crb.hpp"

#include <cmath>
#include <sstream>

#include "arlkit/errors.hpp"

namespace arlkit {

Moments moment_sums(int num_sensors) {
  Moments m{};
  for (int l = 0; l < num_sensors; ++l) {
    double p = 1.0;
    for (auto& v : m) {
      v += p;
      p *= l;
    }
  }
  return m;
}

SpectralSums spectral_sums(int num_sensors, const ElectricalParams& e, cplx h) {
  SpectralSums out;
  out.moment = moment_sums(num_sensors);
  out.h = h;
  cplx s2{}, s3{};
  for (int l = 0; l < num_sensors; ++l) {
    const double ld = l;
    const cplx ph = std::polar(1.0, e.delta * ld + e.phi * ld * ld);
    s2 += ld * ld * ph;
    s3 += ld * ld * ld * ph;
  }
  out.zeta = (h * s2).real();
  out.eta = (h * s3).real();
  return out;
}

SpectralSums spectral_sums(const Scenario& scenario) {
  return spectral_sums(scenario.geometry.num_sensors, scenario.electrical,
                       scenario.signals.stats().cross);
}

CrbSet crb_closed_form(int num_sensors, const ElectricalParams& e,
                       const SignalStats& stats, double sigma2) {
  const SpectralSums s = spectral_sums(num_sensors, e, stats.cross);
  const double L2 = s.moment[2], L3 = s.moment[3], L4 = s.moment[4];

  CrbSet out;
  out.beta = stats.energy2 * (L2 - L3 * L3 / L4);
  const double p2 = L2 * stats.energy1 - s.eta * s.eta / (L4 * stats.energy2);
  const double p1 = s.zeta - s.eta * L3 / L4;
  out.q_det = out.beta * p2 - p1 * p1;

  const double scale = std::max(std::abs(out.beta * p2), p1 * p1);
  if (!(std::abs(out.q_det) > 1e-300 * scale) || !std::isfinite(out.q_det)) {
    std::ostringstream msg;
    msg << "degenerate Schur determinant: Q=" << out.q_det;
    throw Error(ErrorCode::kDegenerateQ, msg.str());
  }
  const double k = 0.5 * sigma2 / out.q_det;
  out.crb_omega1 = k * out.beta;
  out.crb_omega2 = k * p2;
  out.crb_cross = -k * p1;
  out.crb_delta = k * (out.beta + p2 + 2.0 * p1);
  return out;
}

CrbSet crb_closed_form(const Scenario& scenario) {
  scenario.validate();
  return crb_closed_form(scenario.geometry.num_sensors, scenario.electrical,
                         scenario.signals.stats(), scenario.sigma2);
}

double crb_delta(int num_sensors, const ElectricalParams& e,
                 const SignalStats& stats, double sigma2) {
  return crb_closed_form(num_sensors, e, stats, sigma2).crb_delta;
}

double crb_delta(const Scenario& scenario) {
  return crb_closed_form(scenario).crb_delta;
}

}  // namespace arlkit

#include "arlkit/array_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "arlkit/errors.hpp"

namespace arlkit {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

ArrayGeometry ArrayGeometry::from_carrier(int num_sensors, double spacing,
                                          double carrier_hz,
                                          double propagation_speed) {
  require(carrier_hz > 0.0, "carrier frequency must be positive");
  require(propagation_speed > 0.0, "propagation speed must be positive");
  ArrayGeometry geom{num_sensors, spacing, propagation_speed / carrier_hz};
  geom.validate();
  return geom;
}

void ArrayGeometry::validate() const {
  require(num_sensors >= 3,
          "num_sensors must be >= 3 for (omega1, omega2, phi) to be identifiable");
  require(spacing > 0.0 && std::isfinite(spacing), "spacing must be positive");
  require(wavelength > 0.0 && std::isfinite(wavelength),
          "wavelength must be positive");
}

SignalStats SourceSignals::stats() const {
  SignalStats out;
  for (std::size_t t = 0; t < s1.size(); ++t) {
    out.energy1 += std::norm(s1[t]);
    out.energy2 += std::norm(s2[t]);
    out.cross += std::conj(s1[t]) * s2[t];
  }
  return out;
}

void SourceSignals::validate() const {
  require(!s1.empty(), "at least one snapshot is required");
  require(s1.size() == s2.size(), "s1 and s2 must have the same length");
  const SignalStats st = stats();
  require(st.energy1 > 0.0, "far-field source has zero energy");
  require(st.energy2 > 0.0, "near-field source has zero energy");
}

void Scenario::validate() const {
  geometry.validate();
  signals.validate();
  require(sigma2 > 0.0 && std::isfinite(sigma2), "sigma2 must be positive");
  require(electrical.delta != 0.0, "separation delta must be non-zero");
}

Scenario Scenario::with_sigma2(double sigma2_new) const {
  Scenario copy = *this;
  copy.sigma2 = sigma2_new;
  return copy;
}

CVector steering_ff(double omega1, int num_sensors) {
  return steering_nf(omega1, 0.0, num_sensors);
}

CVector steering_nf(double omega2, double phi, int num_sensors) {
  CVector out(static_cast<std::size_t>(num_sensors));
  for (int l = 0; l < num_sensors; ++l) {
    const double ld = l;
    out[l] = std::polar(1.0, omega2 * ld + phi * ld * ld);
  }
  return out;
}

SteeringDerivatives steering_derivatives(double omega1, double omega2,
                                         double phi, int num_sensors) {
  const CVector a = steering_ff(omega1, num_sensors);
  const CVector b = steering_nf(omega2, phi, num_sensors);
  SteeringDerivatives out{CVector(a.size()), CVector(a.size()),
                          CVector(a.size())};
  const cplx i{0.0, 1.0};
  for (int l = 0; l < num_sensors; ++l) {
    const double ld = l;
    out.d_omega1[l] = i * ld * a[l];
    out.d_omega2[l] = i * ld * b[l];
    out.d_phi[l] = i * ld * ld * b[l];
  }
  return out;
}

ElectricalParams physical_to_electrical(const PhysicalParams& phys,
                                        const ArrayGeometry& geom) {
  geom.validate();
  require(phys.range > 0.0, "range must be positive");
  require(std::abs(phys.theta_ff) < kPi / 2 && std::abs(phys.theta_nf) < kPi / 2,
          "angles must lie in (-pi/2, pi/2)");
  const double k = -2.0 * kPi * geom.spacing / geom.wavelength;
  const double omega1 = k * std::sin(phys.theta_ff);
  const double omega2 = k * std::sin(phys.theta_nf);
  const double c = std::cos(phys.theta_nf);
  const double phi = kPi * geom.spacing * geom.spacing /
                     (geom.wavelength * phys.range) * c * c;
  return {omega1, omega2 - omega1, phi};
}

FresnelBounds fresnel_bounds(const ArrayGeometry& geom) {
  geom.validate();
  const double D = geom.aperture();
  const double lambda = geom.wavelength;
  return {0.62 * std::sqrt(D * D * D / lambda), 2.0 * D * D / lambda};
}

FresnelBounds fresnel_interval(const ArrayGeometry& geom) {
  const FresnelBounds b = fresnel_bounds(geom);
  if (b.empty()) {
    throw Error(ErrorCode::kEmptyFresnelRegion,
                "empty Fresnel region: r_min=" + std::to_string(b.r_min) +
                    " m >= r_max=" + std::to_string(b.r_max) + " m");
  }
  return b;
}

CVector noise_free_observation(const Scenario& scenario) {
  const int L = scenario.geometry.num_sensors;
  const auto& e = scenario.electrical;
  const CVector a = steering_ff(e.omega1, L);
  const CVector b = steering_nf(e.omega2(), e.phi, L);
  const auto& sig = scenario.signals;
  CVector y(sig.snapshots() * a.size());
  for (std::size_t t = 0; t < sig.snapshots(); ++t) {
    for (std::size_t l = 0; l < a.size(); ++l) {
      y[t * a.size() + l] = a[l] * sig.s1[t] + b[l] * sig.s2[t];
    }
  }
  return y;
}

SourceSignals make_signals(std::size_t snapshots, double amp_ratio,
                           std::uint64_t seed) {
  require(snapshots >= 1, "at least one snapshot is required");
  require(amp_ratio > 0.0, "amp_ratio must be positive");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  SourceSignals out{CVector(snapshots), CVector(snapshots)};
  for (auto& s : out.s1) s = std::polar(1.0, phase(gen));
  for (auto& s : out.s2) s = std::polar(amp_ratio, phase(gen));
  return out;
}

}  // namespace arlkit

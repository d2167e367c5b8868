#pragma once

// Uniform linear array with one far-field and one near-field source.
//
// Sensor indices run over l = 0..L-1. The far-field source has a linear
// phase omega1*l; the near-field source adds a quadratic (Fresnel) term
// omega2*l + phi*l^2.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace arlkit {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

struct ArrayGeometry {
  int num_sensors = 10;
  double spacing = 0.0125;        // meters
  double wavelength = kSpeedOfLight / 1.0e7;  // meters

  static ArrayGeometry from_carrier(int num_sensors, double spacing,
                                    double carrier_hz,
                                    double propagation_speed = kSpeedOfLight);

  /// Throws kInvalidArgument unless L >= 3, d > 0 and lambda > 0.
  void validate() const;

  double aperture() const { return spacing * (num_sensors - 1); }
};

/// Electrical parameters: omega2 = omega1 + delta.
struct ElectricalParams {
  double omega1 = 0.0;
  double delta = 0.0;
  double phi = 0.0;

  double omega2() const { return omega1 + delta; }
};

struct PhysicalParams {
  double theta_ff = 0.0;  // radians
  double theta_nf = 0.0;  // radians
  double range = 0.0;     // meters, near-field source
};

/// Scalars of the known waveforms that enter every bound.
struct SignalStats {
  double energy1 = 0.0;  // ||s1||^2
  double energy2 = 0.0;  // ||s2||^2
  cplx cross;            // h = s1^H s2
};

struct SourceSignals {
  CVector s1;
  CVector s2;

  std::size_t snapshots() const { return s1.size(); }
  SignalStats stats() const;
  /// Throws kInvalidArgument on T == 0, length mismatch or a zero-energy source.
  void validate() const;
};

struct Scenario {
  ArrayGeometry geometry;
  ElectricalParams electrical;
  SourceSignals signals;
  double sigma2 = 1.0;

  void validate() const;
  Scenario with_sigma2(double sigma2_new) const;
};

/// Near-field region bounds [0.62 sqrt(D^3/lambda), 2 D^2/lambda], D = d(L-1).
struct FresnelBounds {
  double r_min = 0.0;
  double r_max = 0.0;

  bool empty() const { return !(r_min < r_max); }
};

CVector steering_ff(double omega1, int num_sensors);
CVector steering_nf(double omega2, double phi, int num_sensors);

struct SteeringDerivatives {
  CVector d_omega1;  // da/d omega1
  CVector d_omega2;  // db/d omega2
  CVector d_phi;     // db/d phi
};

SteeringDerivatives steering_derivatives(double omega1, double omega2,
                                         double phi, int num_sensors);

ElectricalParams physical_to_electrical(const PhysicalParams& phys,
                                        const ArrayGeometry& geom);

/// Bounds without the emptiness check; useful for diagnostics.
FresnelBounds fresnel_bounds(const ArrayGeometry& geom);

/// Throws kEmptyFresnelRegion when r_min >= r_max.
FresnelBounds fresnel_interval(const ArrayGeometry& geom);

/// Stacked [A s(1); ...; A s(T)], length T*L.
CVector noise_free_observation(const Scenario& scenario);

/// Unit-modulus waveforms with uniform random phases; |s2(t)| = amp_ratio.
SourceSignals make_signals(std::size_t snapshots, double amp_ratio,
                           std::uint64_t seed);

}  // namespace arlkit

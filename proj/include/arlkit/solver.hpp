#pragma once

// Angular resolution limit from the Smith criterion CRB(delta) = delta^2,
// computed three ways: the linearized quartic, the reduced biquadratic
// (closed form), and a scan-and-bisect root of the exact equation.

#include <array>
#include <vector>

#include "arlkit/linearization.hpp"

namespace arlkit {

struct QuarticRoots {
  std::array<cplx, 4> roots{};
  /// Real roots with positive value, ascending.
  std::vector<double> positive_real_roots;
};

/// Roots of x^4 + g3 x^3 + g2 x^2 + g1 x + g0 via companion-matrix
/// eigenvalues, each polished with Newton steps on the polynomial.
QuarticRoots solve_quartic(double g0, double g1, double g2, double g3);

/// Value of the monic quartic at x.
cplx quartic_value(const std::array<double, 4>& g, cplx x);

/// Roots of (beta a2 - alpha1^2) z^2 + (beta a0 - alpha0^2 - c2) z - c0 = 0.
struct BiquadraticRoots {
  double z_plus = 0.0;
  double z_minus = 0.0;
  double discriminant = 0.0;

  bool plus_admissible() const { return z_plus > 0.0; }
  bool minus_admissible() const { return z_minus > 0.0; }
};

/// Throws kNegativeDiscriminant when no real candidate exists.
BiquadraticRoots solve_biquadratic(const LinearCoeffs& coeffs);

/// sqrt(z_plus). Throws kNegativeDiscriminant or kNegativeRadicand.
double arl_closed_form(const LinearCoeffs& coeffs);

/// sqrt(c0 / (beta a0 - alpha0^2 - c2)).
/// Throws kInvalidLowNoiseRegime when the radicand is negative.
double arl_low_noise(const LinearCoeffs& coeffs);

struct SmithOptions {
  double delta_max = 0.0;  // <= 0 selects pi / (L - 1)
  double delta_min = 1e-12;
  double tol = 1e-12;
  int grid_points = 2048;
};

/// Smallest positive root of crb_delta(delta) - delta^2 on the exact bound.
/// Throws kNoSignChange when the scan range holds no crossing.
double smith_numeric(const Scenario& scenario, const SmithOptions& opts = {});

/// Picks the sigma2-dependent positive quartic root. Roots whose relative
/// movement under sigma2 -> 1.01 sigma2 is below 1e-9 are discarded.
/// Throws kNoAdmissibleRoot.
double select_arl_root(const QuarticRoots& quartic, const LinearCoeffs& coeffs);

enum class Branch { kPlus, kMinus };

struct ArlResult {
  double arl_closed = 0.0;
  double arl_low_noise = 0.0;
  double arl_numeric = 0.0;
  double arl_quartic = 0.0;
  double discriminant = 0.0;
  Branch selected_branch = Branch::kPlus;
};

ArlResult compute_arl(const Scenario& scenario, const SmithOptions& opts = {});

}  // namespace arlkit

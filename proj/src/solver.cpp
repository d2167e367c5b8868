#include "arlkit/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"

namespace arlkit {

namespace {

constexpr double kRealTol = 1e-10;
constexpr double kInvarianceTol = 1e-9;
constexpr double kSigmaBump = 1.01;

cplx quartic_derivative(const std::array<double, 4>& g, cplx x) {
  return ((4.0 * x + 3.0 * g[3]) * x + 2.0 * g[2]) * x + g[1];
}

// Parlett-Reinsch diagonal similarity with radix-2 scale factors, as in
// LAPACK xGEBAL. Companion matrices of quartics whose roots span many decades
// lose the small roots to rounding without it.
void balance(Eigen::Matrix4d& m) {
  constexpr double kRadix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < 4; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < 4; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / kRadix;
      while (c < g) {
        f *= kRadix;
        c *= kRadix * kRadix;
      }
      g = r * kRadix;
      while (c >= g) {
        f /= kRadix;
        c /= kRadix * kRadix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

cplx polish(const std::array<double, 4>& g, cplx x) {
  double best = std::abs(quartic_value(g, x));
  for (int it = 0; it < 32 && best > 0.0; ++it) {
    const cplx d = quartic_derivative(g, x);
    if (d == cplx{}) break;
    const cplx next = x - quartic_value(g, x) / d;
    const double res = std::abs(quartic_value(g, next));
    if (!(res < best)) break;
    x = next;
    best = res;
  }
  return x;
}

}  // namespace

cplx quartic_value(const std::array<double, 4>& g, cplx x) {
  return (((x + g[3]) * x + g[2]) * x + g[1]) * x + g[0];
}

QuarticRoots solve_quartic(double g0, double g1, double g2, double g3) {
  const std::array<double, 4> g{g0, g1, g2, g3};
  for (double c : g) {
    if (!std::isfinite(c)) {
      throw Error(ErrorCode::kInvalidArgument, "quartic coefficient not finite");
    }
  }
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -g[i];

  balance(companion);
  Eigen::EigenSolver<Eigen::Matrix4d> es(companion, false);
  const Eigen::Vector4cd ev = es.eigenvalues();

  QuarticRoots out;
  for (int i = 0; i < 4; ++i) {
    cplx z = ev(i);
    if (std::abs(z.imag()) <= kRealTol * std::abs(z)) z = {z.real(), 0.0};
    out.roots[i] = polish(g, z);
    if (out.roots[i].imag() == 0.0 && out.roots[i].real() > 0.0) {
      out.positive_real_roots.push_back(out.roots[i].real());
    }
  }
  std::sort(out.positive_real_roots.begin(), out.positive_real_roots.end());
  return out;
}

BiquadraticRoots solve_biquadratic(const LinearCoeffs& k) {
  const double a = k.lead();
  const double b = k.reduced_mid();
  const double c = -k.c0;
  BiquadraticRoots out;
  out.discriminant = b * b - 4.0 * a * c;
  if (!(out.discriminant >= 0.0)) {
    std::ostringstream msg;
    msg << "negative discriminant: " << out.discriminant;
    throw Error(ErrorCode::kNegativeDiscriminant, msg.str());
  }
  const double sq = std::sqrt(out.discriminant);
  // Vieta form avoids cancellation in -b + sqrt(disc).
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) {
    out.z_plus = out.z_minus = 0.0;
    return out;
  }
  if (b >= 0.0) {
    out.z_minus = q / a;
    out.z_plus = c / q;
  } else {
    out.z_plus = q / a;
    out.z_minus = c / q;
  }
  return out;
}

double arl_closed_form(const LinearCoeffs& coeffs) {
  const BiquadraticRoots bq = solve_biquadratic(coeffs);
  if (!(bq.z_plus >= 0.0)) {
    std::ostringstream msg;
    msg << "negative radicand on the + branch: z=" << bq.z_plus;
    throw Error(ErrorCode::kNegativeRadicand, msg.str());
  }
  return std::sqrt(bq.z_plus);
}

double arl_low_noise(const LinearCoeffs& k) {
  const double den = k.reduced_mid();
  if (!(den > 0.0) || !(k.c0 >= 0.0)) {
    std::ostringstream msg;
    msg << "invalid low-noise regime: c0=" << k.c0
        << ", beta*a0 - alpha0^2 - c2=" << den;
    throw Error(ErrorCode::kInvalidLowNoiseRegime, msg.str());
  }
  return std::sqrt(k.c0 / den);
}

double smith_numeric(const Scenario& scenario, const SmithOptions& opts) {
  scenario.validate();
  const int L = scenario.geometry.num_sensors;
  const double hi_bound = opts.delta_max > 0.0 ? opts.delta_max : kPi / (L - 1);
  if (!(opts.delta_min > 0.0 && opts.delta_min < hi_bound) ||
      opts.grid_points < 2 || !(opts.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid Smith scan options");
  }
  const SignalStats stats = scenario.signals.stats();
  ElectricalParams e = scenario.electrical;
  auto f = [&](double delta) {
    e.delta = delta;
    return crb_delta(L, e, stats, scenario.sigma2) - delta * delta;
  };

  const double log_lo = std::log(opts.delta_min);
  const double step = (std::log(hi_bound) - log_lo) / (opts.grid_points - 1);
  double lo = opts.delta_min;
  double f_lo = f(lo);
  if (!(f_lo > 0.0)) {
    std::ostringstream msg;
    msg << "no sign change: CRB(delta) <= delta^2 already at the scan floor "
        << opts.delta_min;
    throw Error(ErrorCode::kNoSignChange, msg.str());
  }
  for (int i = 1; i < opts.grid_points; ++i) {
    const double x = i + 1 == opts.grid_points ? hi_bound
                                               : std::exp(log_lo + step * i);
    const double fx = f(x);
    if (fx <= 0.0) {
      double hi = x;
      while (hi - lo > 0.5 * opts.tol * lo) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    lo = x;
    f_lo = fx;
  }
  std::ostringstream msg;
  msg << "no sign change: CRB(delta) > delta^2 on (" << opts.delta_min << ", "
      << hi_bound << "]";
  throw Error(ErrorCode::kNoSignChange, msg.str());
}

double select_arl_root(const QuarticRoots& quartic, const LinearCoeffs& coeffs) {
  const LinearCoeffs bumped = with_sigma2(coeffs, coeffs.sigma2 * kSigmaBump);
  const QuarticRoots moved =
      solve_quartic(bumped.g0, bumped.g1, bumped.g2, bumped.g3);

  double best = std::numeric_limits<double>::quiet_NaN();
  double best_sens = 0.0;
  for (double r : quartic.positive_real_roots) {
    double nearest = std::numeric_limits<double>::quiet_NaN();
    for (double m : moved.positive_real_roots) {
      if (!(std::abs(m - r) >= std::abs(nearest - r))) nearest = m;
    }
    if (std::isnan(nearest)) continue;
    const double sens = (nearest - r) / r;
    // Noise-invariant roots are the spurious pair; the ARL grows with sigma2.
    if (std::abs(sens) < kInvarianceTol || sens <= 0.0) continue;
    if (sens > best_sens) {
      best_sens = sens;
      best = r;
    }
  }
  if (std::isnan(best)) {
    throw Error(ErrorCode::kNoAdmissibleRoot,
                "no admissible root: every positive root is noise-invariant");
  }
  return best;
}

ArlResult compute_arl(const Scenario& scenario, const SmithOptions& opts) {
  const LinearCoeffs k = linear_coeffs(scenario);
  ArlResult out;
  out.discriminant = solve_biquadratic(k).discriminant;
  out.arl_closed = arl_closed_form(k);
  out.arl_low_noise = arl_low_noise(k);
  const QuarticRoots roots = solve_quartic(k.g0, k.g1, k.g2, k.g3);
  out.arl_quartic = select_arl_root(roots, k);
  out.arl_numeric = smith_numeric(scenario, opts);
  return out;
}

}  // namespace arlkit

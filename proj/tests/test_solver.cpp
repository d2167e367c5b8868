#include <algorithm>
#include <cmath>
#include <random>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"
#include "arlkit/experiment.hpp"
#include "arlkit/solver.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace arlkit;
using arlkit::testing::rel_err;

namespace {

// Monic quartic coefficients (g0..g3) with the given roots.
std::array<double, 4> from_roots(const std::array<cplx, 4>& r) {
  std::array<cplx, 5> c{cplx(1), 0, 0, 0, 0};  // c[k] multiplies x^k
  int deg = 0;
  for (const cplx& root : r) {
    for (int k = deg + 1; k >= 1; --k) c[k] = c[k - 1] - root * c[k];
    c[0] = -root * c[0];
    ++deg;
  }
  return {c[0].real(), c[1].real(), c[2].real(), c[3].real()};
}

double nearest(const std::array<cplx, 4>& roots, cplx z) {
  double best = INFINITY;
  for (const cplx& r : roots) best = std::min(best, std::abs(r - z));
  return best;
}

Scenario default_scenario(double sigma2) {
  return build_scenario(ExperimentConfig{}, sigma2);
}

LinearCoeffs hand_coeffs(double beta, double a2, double a0, double c0) {
  LinearCoeffs k;
  k.beta = beta;
  k.a2 = a2;
  k.a0 = a0;
  k.c0 = c0;
  return k;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("fourth roots of unity") {
    const QuarticRoots q = solve_quartic(-1, 0, 0, 0);
    for (cplx z : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
      CHECK(nearest(q.roots, z) < 1e-14);
    }
    REQUIRE(q.positive_real_roots.size() == 1);
    CHECK(q.positive_real_roots[0] == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("factorable biquadratic") {
    const QuarticRoots q = solve_quartic(4, 0, -5, 0);
    for (double z : {1.0, -1.0, 2.0, -2.0}) CHECK(nearest(q.roots, cplx(z, 0)) < 1e-14);
    REQUIRE(q.positive_real_roots.size() == 2);
    CHECK(q.positive_real_roots[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q.positive_real_roots[1] == doctest::Approx(2.0).epsilon(1e-15));
  }

  TEST_CASE("random quartics with known roots") {
    std::mt19937_64 gen(1234);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::array<cplx, 4> r;
      if (trial % 2 == 0) {
        r = {cplx(u(gen)), cplx(u(gen)), cplx(u(gen)), cplx(u(gen))};
      } else {
        const cplx z(u(gen), std::abs(u(gen)) + 0.1);
        r = {z, std::conj(z), cplx(u(gen)), cplx(u(gen))};
      }
      // Keep the real roots apart so the root map is well conditioned.
      bool separated = true;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) separated &= std::abs(r[i] - r[j]) > 0.05;
      if (!separated) continue;
      const auto g = from_roots(r);
      const QuarticRoots q = solve_quartic(g[0], g[1], g[2], g[3]);
      for (const cplx& z : r) CHECK(nearest(q.roots, z) < 1e-9 * std::max(1.0, std::abs(z)));
      for (const cplx& z : q.roots) {
        CHECK(std::abs(quartic_value(g, z)) < 1e-9 * std::max(1.0, std::abs(g[0])));
      }
    }
  }

  TEST_CASE("random coefficients against Durand-Kerner") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::array<double, 4> g{u(gen), u(gen), u(gen), u(gen)};
      const auto ref = arlkit::testing::durand_kerner(g);
      const QuarticRoots q = solve_quartic(g[0], g[1], g[2], g[3]);
      for (const auto& z : ref) {
        const cplx zd(double(z.real()), double(z.imag()));
        CHECK(nearest(q.roots, zd) < 1e-9 * std::max(1.0, std::abs(zd)));
      }
    }
  }

  TEST_CASE("widely spread roots keep relative accuracy") {
    const std::array<cplx, 4> r{cplx(1.5e-10), cplx(-1.4e-10), cplx(2.9), cplx(-3.1)};
    const auto g = from_roots(r);
    const QuarticRoots q = solve_quartic(g[0], g[1], g[2], g[3]);
    for (const cplx& z : r) CHECK(nearest(q.roots, z) < 1e-12 * std::abs(z));
  }

  TEST_CASE("biquadratic at zero noise") {
    const LinearCoeffs k = with_sigma2(linear_coeffs(default_scenario(1.0)), 0.0);
    const BiquadraticRoots bq = solve_biquadratic(k);
    CHECK(bq.discriminant == doctest::Approx(k.qd0() * k.qd0()).epsilon(1e-14));
    CHECK(bq.z_plus == 0.0);
    CHECK(rel_err(bq.z_minus, -k.qd0() / k.lead()) < 1e-15);
  }

  TEST_CASE("biquadratic roots satisfy the quadratic") {
    for (double s2 : {1.0, 1e-3, 1e-9, 1e-14}) {
      const LinearCoeffs k = linear_coeffs(default_scenario(s2));
      const BiquadraticRoots bq = solve_biquadratic(k);
      for (double z : {bq.z_plus, bq.z_minus}) {
        const double terms[3] = {k.lead() * z * z, k.reduced_mid() * z, k.c0};
        const double scale = std::max({std::abs(terms[0]), std::abs(terms[1]), terms[2]});
        CHECK(std::abs(terms[0] + terms[1] - terms[2]) < 1e-10 * scale);
      }
      CHECK(bq.plus_admissible());
      // The other root is positive here but lies far outside the physical
      // separation range.
      CHECK(std::sqrt(bq.z_minus) > kPi / 9.0);
    }
  }

  TEST_CASE("z_plus is the square of the quartic's small root pair") {
    for (double s2 : {1e-10, 1e-12, 1e-14}) {
      const LinearCoeffs k = linear_coeffs(default_scenario(s2));
      const QuarticRoots q = solve_quartic(k.g0, k.g1, k.g2, k.g3);
      const double zp = solve_biquadratic(k).z_plus;
      // Product of the two roots of smallest modulus is -delta^2.
      std::array<cplx, 4> r = q.roots;
      std::sort(r.begin(), r.end(),
                [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
      CHECK(rel_err(-(r[0] * r[1]).real(), zp) < 1e-8);
    }
  }

  TEST_CASE("closed-form ARL is sqrt(z_plus)") {
    const LinearCoeffs k = linear_coeffs(default_scenario(1e-9));
    CHECK(arl_closed_form(k) == std::sqrt(solve_biquadratic(k).z_plus));
  }

  TEST_CASE("ARL is O(sigma)") {
    const LinearCoeffs k1 = linear_coeffs(default_scenario(1.0));
    double prev = INFINITY;
    double ratio_lo = INFINITY, ratio_hi = 0.0;
    for (int e = 0; e <= 16; ++e) {
      const double s2 = std::pow(10.0, -e);
      const double arl = arl_closed_form(with_sigma2(k1, s2));
      CHECK(arl < prev);
      prev = arl;
      if (e >= 6) {
        ratio_lo = std::min(ratio_lo, arl / std::sqrt(s2));
        ratio_hi = std::max(ratio_hi, arl / std::sqrt(s2));
      }
    }
    CHECK(prev < 1e-9);
    CHECK(ratio_hi / ratio_lo < 1.0 + 1e-6);
  }

  TEST_CASE("low-noise approximation") {
    LinearCoeffs zero = linear_coeffs(default_scenario(1.0));
    zero.c0 = 0.0;
    CHECK(arl_low_noise(zero) == 0.0);

    const LinearCoeffs k1 = linear_coeffs(default_scenario(1.0));
    for (int e = 0; e <= 12; ++e) {
      const LinearCoeffs k = with_sigma2(k1, std::pow(10.0, -e));
      const double x = 4 * std::abs(k.lead()) * k.c0 / (k.reduced_mid() * k.reduced_mid());
      if (x < 0.01) CHECK(rel_err(arl_low_noise(k), arl_closed_form(k)) < 0.01);
      const LinearCoeffs k4 = with_sigma2(k1, 4 * std::pow(10.0, -e));
      CHECK(rel_err(arl_low_noise(k4), 2 * arl_low_noise(k)) < 1e-3);
    }
  }

  TEST_CASE("error paths on hand-built coefficients") {
    // lead = -1, B = 0.1, c0 = 1: discriminant 0.01 - 4 < 0.
    const LinearCoeffs neg_disc = hand_coeffs(1.0, -1.0, 0.1, 1.0);
    try {
      solve_biquadratic(neg_disc);
      FAIL("expected negative discriminant");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNegativeDiscriminant);
    }
    // lead = -1, B = -1, c0 = 0.01: both candidates negative.
    const LinearCoeffs neg_rad = hand_coeffs(1.0, -1.0, -1.0, 0.01);
    try {
      arl_closed_form(neg_rad);
      FAIL("expected negative radicand");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNegativeRadicand);
    }
    try {
      arl_low_noise(neg_rad);
      FAIL("expected invalid low-noise regime");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidLowNoiseRegime);
    }
  }

  TEST_CASE("exact Smith root") {
    SmithOptions opts;
    for (double s2 : {1e-8, 1e-10, 1e-12}) {
      const Scenario s = default_scenario(s2);
      const double d = smith_numeric(s, opts);
      ElectricalParams e = s.electrical;
      e.delta = d;
      const double crb = crb_delta(s.geometry.num_sensors, e, s.signals.stats(), s2);
      CHECK(std::abs(crb - d * d) < opts.tol * d * d);
      CHECK(smith_numeric(s.with_sigma2(2 * s2), opts) > d);
      const double closed = arl_closed_form(linear_coeffs(s));
      if (closed * (s.geometry.num_sensors - 1) < 0.1) CHECK(rel_err(closed, d) < 0.05);
    }
  }

  TEST_CASE("exact Smith root on random scenarios") {
    std::mt19937_64 gen(17);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
      Scenario s = arlkit::testing::random_case(gen);
      s.sigma2 *= 1e-4;
      try {
        const double closed = arl_closed_form(linear_coeffs(s));
        if (closed * (s.geometry.num_sensors - 1) >= 0.1) continue;
        CHECK(rel_err(closed, smith_numeric(s)) < 0.05);
        ++compared;
      } catch (const Error&) {
      }
    }
    CHECK(compared > 10);
  }

  TEST_CASE("no sign change") {
    SmithOptions opts;
    try {
      smith_numeric(default_scenario(1e6), opts);
      FAIL("expected no sign change");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoSignChange);
    }
    opts.delta_min = 1e-3;  // above the root at this noise level
    try {
      smith_numeric(default_scenario(1e-12), opts);
      FAIL("expected no sign change below the scan floor");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoSignChange);
    }
  }

  TEST_CASE("root selection discards the noise-invariant root") {
    const LinearCoeffs k1 = linear_coeffs(default_scenario(1.0));
    double prev_sel = INFINITY;
    double spurious_lo = INFINITY, spurious_hi = 0.0;
    for (int e = 9; e <= 15; ++e) {
      const LinearCoeffs k = with_sigma2(k1, std::pow(10.0, -e));
      const QuarticRoots q = solve_quartic(k.g0, k.g1, k.g2, k.g3);
      REQUIRE(q.positive_real_roots.size() == 2);
      const double sel = select_arl_root(q, k);
      CHECK(rel_err(sel, arl_closed_form(k)) < 1e-8);
      CHECK(sel < prev_sel);
      prev_sel = sel;
      const double other = sel == q.positive_real_roots[0] ? q.positive_real_roots[1]
                                                          : q.positive_real_roots[0];
      spurious_lo = std::min(spurious_lo, other);
      spurious_hi = std::max(spurious_hi, other);
    }
    CHECK((spurious_hi - spurious_lo) / spurious_hi < 1e-9);

    QuarticRoots only_spurious;
    only_spurious.positive_real_roots = {spurious_hi};
    try {
      select_arl_root(only_spurious, with_sigma2(k1, 1e-12));
      FAIL("expected no admissible root");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoAdmissibleRoot);
    }
  }

  TEST_CASE("compute_arl bundles the three routes") {
    const ArlResult r = compute_arl(default_scenario(1e-12));
    CHECK(r.arl_closed > 0.0);
    CHECK(r.arl_numeric > 0.0);
    CHECK(r.arl_low_noise > 0.0);
    CHECK(rel_err(r.arl_closed, r.arl_quartic) < 1e-8);
    CHECK(rel_err(r.arl_closed, r.arl_numeric) < 0.05);
    CHECK(r.discriminant > 0.0);
    CHECK(r.selected_branch == Branch::kPlus);
  }
}

#include <cmath>
#include <random>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"
#include "arlkit/experiment.hpp"
#include "arlkit/linearization.hpp"
#include "arlkit/solver.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace arlkit;
using arlkit::testing::rel_err;

namespace {

// Random scenario whose quartic is well defined (non-real h, phi != 0).
Scenario curved_case(std::mt19937_64& gen) {
  for (;;) {
    Scenario s = arlkit::testing::random_case(gen);
    try {
      linear_coeffs(s);
      return s;
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_SUITE("linearization") {
  TEST_CASE("phi sums at zero curvature") {
    const PhiSums p = phi_sums(0.0, 10);
    CHECK(p.u == cplx(285, 0));
    CHECK(p.v == cplx(2025, 0));
    CHECK(p.r == cplx(15333, 0));
  }

  TEST_CASE("phi sums at phi = pi, L = 3") {
    const PhiSums p = phi_sums(kPi, 3);
    CHECK(std::abs(p.u - cplx(3, 0)) < 1e-14);
    CHECK(std::abs(p.v - cplx(7, 0)) < 1e-13);   // -1 + 8
    CHECK(std::abs(p.r - cplx(15, 0)) < 1e-13);  // -1 + 16
  }

  TEST_CASE("phi sums bounded by the moments") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      const int L = 3 + trial % 20;
      const PhiSums p = phi_sums(u(gen), L);
      const Moments m = moment_sums(L);
      CHECK(std::abs(p.u) <= m[2] * (1 + 1e-14));
      CHECK(std::abs(p.v) <= m[3] * (1 + 1e-14));
      CHECK(std::abs(p.r) <= m[4] * (1 + 1e-14));
    }
  }

  TEST_CASE("first-order expansions converge at second order") {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 10; ++trial) {
      const Scenario s = curved_case(gen);
      const int L = s.geometry.num_sensors;
      const LinearCoeffs k = linear_coeffs(s);
      const Moments m = moment_sums(L);
      const SignalStats st = s.signals.stats();
      const auto errors = [&](double d) {
        const SpectralSums ss = spectral_sums(L, {0.0, d, s.electrical.phi}, st.cross);
        const double p1 = ss.zeta - ss.eta * m[3] / m[4];
        const double p2 = m[2] * st.energy1 - ss.eta * ss.eta / (m[4] * st.energy2);
        const double zeta_lin = k.Pp + d * k.Qp;
        const double p1_lin = k.alpha0 + k.alpha1 * d;
        const double p2_lin = (k.a2 * d + k.a1) * d + k.a0;
        return std::array<double, 3>{std::abs(ss.zeta - zeta_lin),
                                     std::abs(p1 - p1_lin), std::abs(p2 - p2_lin)};
      };
      const double d0 = 1e-3 / (L - 1);
      const auto e1 = errors(d0);
      const auto e2 = errors(d0 / 2);
      for (int i = 0; i < 3; ++i) {
        const double ratio = e1[i] / e2[i];
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
      }
    }
  }

  TEST_CASE("real cross term with no curvature is degenerate") {
    Scenario s;
    s.geometry = {10, 0.5, 1.0};
    s.electrical = {0.1, 0.01, 0.0};
    s.signals.s1 = {cplx(1, 0), cplx(2, 0)};
    s.signals.s2 = {cplx(3, 0), cplx(-1, 0)};
    s.sigma2 = 1.0;
    try {
      linear_coeffs(s);
      FAIL("expected degenerate quartic");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDegenerateQuartic);
    }
  }

  TEST_CASE("noise terms vanish at zero noise and a2 <= 0") {
    std::mt19937_64 gen(1);
    const Scenario s = curved_case(gen);
    const LinearCoeffs k = with_sigma2(linear_coeffs(s), 0.0);
    CHECK(k.c0 == 0.0);
    CHECK(k.c1 == 0.0);
    CHECK(k.c2 == 0.0);
    CHECK(k.a2 <= 0.0);
  }

  TEST_CASE("coefficient formulas") {
    std::mt19937_64 gen(55);
    const Scenario s = curved_case(gen);
    const LinearCoeffs k = linear_coeffs(s);
    const SignalStats st = s.signals.stats();
    const Moments m = moment_sums(s.geometry.num_sensors);
    const PhiSums p = phi_sums(s.electrical.phi, s.geometry.num_sensors);
    CHECK(k.P == (st.cross * p.v).real());
    CHECK(k.Q == -(st.cross * p.r).imag());
    CHECK(k.Pp == (st.cross * p.u).real());
    CHECK(k.Qp == -(st.cross * p.v).imag());
    CHECK(rel_err(k.beta, st.energy2 * (m[2] - m[3] * m[3] / m[4])) < 1e-15);
    CHECK(rel_err(k.c0, 0.5 * s.sigma2 * (k.beta + k.a0 + 2 * k.alpha0)) < 1e-15);
    CHECK(rel_err(k.c1, 0.5 * s.sigma2 * (k.a1 + 2 * k.alpha1)) < 1e-15);
    CHECK(rel_err(k.c2, 0.5 * s.sigma2 * k.a2) < 1e-15);
  }

  TEST_CASE("Q polynomials at zero separation") {
    std::mt19937_64 gen(2);
    const LinearCoeffs k = linear_coeffs(curved_case(gen));
    CHECK(q_poly(k, 0.0) == k.beta * k.a0 - k.alpha0 * k.alpha0);
    CHECK(q_prime_poly(k, 0.0) == k.c0);
  }

  TEST_CASE("Qd(x) x^2 - Qn(x) equals lead times the monic quartic") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (int trial = 0; trial < 20; ++trial) {
      const LinearCoeffs k = linear_coeffs(curved_case(gen));
      for (int j = 0; j < 10; ++j) {
        const double x = u(gen);
        const double lhs = q_poly(k, x) * x * x - q_prime_poly(k, x);
        const double rhs = k.lead() * quartic_value(k.monic(), x).real();
        // Scale: largest individual term of the left-hand side.
        const double scale = std::max({std::abs(k.lead() * x * x * x * x),
                                       std::abs(k.qd0() * x * x), std::abs(k.c0),
                                       std::abs(k.cubic() * x * x * x)});
        CHECK(std::abs(lhs - rhs) < 1e-12 * scale);
      }
    }
  }

  TEST_CASE("linearized CRBs agree with the exact closed form at small separation") {
    std::mt19937_64 gen(13);
    std::vector<Scenario> cases{build_scenario(ExperimentConfig{}, 1e-6)};
    for (int i = 0; i < 20; ++i) cases.push_back(curved_case(gen));
    for (const Scenario& s : cases) {
      const int L = s.geometry.num_sensors;
      const LinearCoeffs k = linear_coeffs(s);
      const SignalStats st = s.signals.stats();
      for (double frac : {0.049, 0.02, 0.005, -0.02, -0.049}) {
        const double d = frac / (L - 1);
        const CrbSet exact =
            crb_closed_form(L, {s.electrical.omega1, d, s.electrical.phi}, st, s.sigma2);
        const LinearizedCrb lin = linearized_crb(k, d);
        CHECK(rel_err(lin.crb_omega1, exact.crb_omega1) < 0.01);
        CHECK(rel_err(lin.crb_omega2, exact.crb_omega2) < 0.01);
        CHECK(rel_err(lin.crb_delta, exact.crb_delta) < 0.01);
        // The coupling term can cross zero; compare on the scale of the variances.
        CHECK(std::abs(lin.crb_cross - exact.crb_cross) <
              0.01 * std::sqrt(exact.crb_omega1 * exact.crb_omega2));
      }
    }
  }

  TEST_CASE("g invariant under joint scaling of signals and noise") {
    std::mt19937_64 gen(44);
    for (int trial = 0; trial < 10; ++trial) {
      Scenario s = curved_case(gen);
      const LinearCoeffs a = linear_coeffs(s);
      const double kappa = 3.7;
      for (auto& v : s.signals.s1) v *= kappa;
      for (auto& v : s.signals.s2) v *= kappa;
      s.sigma2 *= kappa * kappa;
      const LinearCoeffs b = linear_coeffs(s);
      CHECK(rel_err(a.g0, b.g0) < 1e-12);
      CHECK(rel_err(a.g1, b.g1) < 1e-12);
      CHECK(rel_err(a.g2, b.g2) < 1e-12);
      CHECK(rel_err(a.g3, b.g3) < 1e-12);
    }
  }
}

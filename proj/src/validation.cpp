#include "arlkit/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"
#include "arlkit/fim.hpp"

namespace arlkit {

namespace {

double rel_err(double a, double b) {
  const double den = std::max(std::abs(a), std::abs(b));
  return den == 0.0 ? 0.0 : std::abs(a - b) / den;
}

CheckResult make(std::string name, double measured, double threshold,
                 std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.threshold = threshold;
  r.passed = measured < threshold;
  r.detail = std::move(detail);
  return r;
}

CheckResult failed(std::string name, double threshold, const std::exception& e) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = std::numeric_limits<double>::infinity();
  r.threshold = threshold;
  r.detail = e.what();
  return r;
}

LinearCoeffs corrupted(LinearCoeffs k, double rel) {
  k.g0 *= 1.0 + rel;
  return k;
}

CheckResult check_crb_equivalence(const ValidationOptions& opts) {
  constexpr double kTol = 1e-9;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = random_scenario(opts.random_seed + i);
    const CrbNumeric num = crb_numeric(fim_slepian_bangs(s));
    const CrbSet cf = crb_closed_form(s);
    worst = std::max({worst, rel_err(cf.crb_omega1, num.crb_omega1),
                      rel_err(cf.crb_omega2, num.crb_omega2),
                      rel_err(cf.crb_cross, num.crb_cross_12),
                      rel_err(cf.crb_delta, crb_delta_numeric(num))});
  }
  return make("crb_equivalence", worst, kTol, "100 random scenarios");
}

CheckResult check_derivatives(const ValidationOptions& opts) {
  constexpr double kStep = 1e-6;
  constexpr double kTol = 1e-8;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Scenario s = random_scenario(opts.random_seed + 1000 + i);
    const int L = s.geometry.num_sensors;
    const double w1 = s.electrical.omega1, w2 = s.electrical.omega2(),
                 phi = s.electrical.phi;
    const SteeringDerivatives d = steering_derivatives(w1, w2, phi, L);
    const auto fd = [&](auto&& fn, double x) {
      const CVector p = fn(x + kStep), m = fn(x - kStep);
      CVector out(p.size());
      for (std::size_t l = 0; l < p.size(); ++l) out[l] = (p[l] - m[l]) / (2 * kStep);
      return out;
    };
    const CVector fd1 = fd([&](double x) { return steering_ff(x, L); }, w1);
    const CVector fd2 = fd([&](double x) { return steering_nf(x, phi, L); }, w2);
    const CVector fd3 = fd([&](double x) { return steering_nf(w2, x, L); }, phi);
    const auto vec_err = [](const CVector& a, const CVector& b) {
      double num = 0.0, den = 0.0;
      for (std::size_t l = 0; l < a.size(); ++l) {
        num += std::norm(a[l] - b[l]);
        den += std::norm(b[l]);
      }
      return std::sqrt(num / den);
    };
    worst = std::max({worst, vec_err(fd1, d.d_omega1), vec_err(fd2, d.d_omega2),
                      vec_err(fd3, d.d_phi)});
  }
  return make("derivative_correctness", worst, kTol, "20 random scenarios");
}

struct SweepPoint {
  double sigma2;
  LinearCoeffs coeffs;
  QuarticRoots quartic;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config,
                                     const ValidationOptions& opts) {
  const Scenario base = build_scenario(config, 1.0);
  const LinearCoeffs k1 = linear_coeffs(base);
  std::vector<SweepPoint> out;
  for (double inv : inv_sigma2_grid(config)) {
    SweepPoint p{1.0 / inv, corrupted(with_sigma2(k1, 1.0 / inv), opts.g0_corruption),
                 {}};
    p.quartic = solve_quartic(p.coeffs.g0, p.coeffs.g1, p.coeffs.g2, p.coeffs.g3);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<CheckResult> check_quartic_integrity(const std::vector<SweepPoint>& pts) {
  double worst_residual = 0.0, worst_pair = 0.0, worst_vieta = 0.0;
  for (const auto& p : pts) {
    const auto g = p.coeffs.monic();
    double best_pair = std::numeric_limits<double>::infinity();
    cplx sum{}, prod{1.0, 0.0};
    for (int i = 0; i < 4; ++i) {
      const cplx r = p.quartic.roots[i];
      worst_residual = std::max(
          worst_residual, std::abs(quartic_value(g, r)) / std::max(1.0, std::abs(g[0])));
      for (int j = i + 1; j < 4; ++j) {
        best_pair = std::min(best_pair, std::abs(r + p.quartic.roots[j]));
      }
      sum += r;
      prod *= r;
    }
    worst_pair = std::max(worst_pair, best_pair);
    worst_vieta = std::max({worst_vieta, std::abs(sum + g[3]) / std::abs(g[3]),
                            std::abs(prod - g[0]) / std::abs(g[0])});
  }
  return {make("quartic_residual", worst_residual, 1e-9),
          make("quartic_root_pair", worst_pair, 1e-6),
          make("quartic_vieta", worst_vieta, 1e-9)};
}

std::vector<CheckResult> check_three_way(const ExperimentConfig& config,
                                         const std::vector<SweepPoint>& pts) {
  const Scenario base = build_scenario(config, 1.0);
  const int L = base.geometry.num_sensors;
  double worst_pair = 0.0, worst_numeric = 0.0;
  int compared = 0;
  for (const auto& p : pts) {
    const double closed = arl_closed_form(p.coeffs);
    const double root = select_arl_root(p.quartic, p.coeffs);
    const double zp = std::sqrt(solve_biquadratic(p.coeffs).z_plus);
    worst_pair = std::max({worst_pair, rel_err(closed, root), rel_err(closed, zp),
                           rel_err(root, zp)});
    if (closed * (L - 1) < 0.1) {
      const double num = smith_numeric(base.with_sigma2(p.sigma2), config.smith_options());
      worst_numeric = std::max({worst_numeric, rel_err(closed, num),
                                rel_err(root, num), rel_err(zp, num)});
      ++compared;
    }
  }
  return {make("arl_three_way", worst_pair, 1e-8),
          make("arl_vs_smith_numeric", worst_numeric, 0.05,
               std::to_string(compared) + " points with ARL*(L-1) < 0.1")};
}

CheckResult check_o_sigma(const ExperimentConfig& config) {
  const Scenario base = build_scenario(config, 1.0);
  const LinearCoeffs k1 = linear_coeffs(base);
  const double s0 = 1.0 / config.sweep.inv_sigma2_stop;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double s2 = s0 * std::pow(100.0, i / 20.0);
    const double ratio = arl_closed_form(with_sigma2(k1, s2)) / std::sqrt(s2);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return make("o_sigma_law", hi / lo, 1.01, "max/min of ARL/sigma");
}

CheckResult check_low_noise(const ExperimentConfig& config) {
  const LinearCoeffs k1 = linear_coeffs(build_scenario(config, 1.0));
  const auto expansion = [](const LinearCoeffs& k) {
    const double b = k.reduced_mid();
    return 4.0 * std::abs(k.lead()) * k.c0 / (b * b);
  };
  // Largest decade of sigma2 where the expansion parameter is small.
  double top = 1e6;
  while (top > 1e-30 && !(expansion(with_sigma2(k1, top)) < 0.01)) top /= 10.0;

  double worst = 0.0, prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (int i = 0; i <= 24; ++i) {
    const LinearCoeffs k = with_sigma2(k1, top * std::pow(10.0, -i / 4.0));
    const double dev = rel_err(arl_low_noise(k), arl_closed_form(k));
    worst = std::max(worst, dev);
    if (!(dev < prev)) monotone = false;
    prev = dev;
  }
  CheckResult r = make("low_noise_approximation", worst, 0.01);
  r.passed = r.passed && monotone;
  r.detail = monotone ? "deviation decreases with sigma2"
                      : "deviation not monotone in sigma2";
  return r;
}

std::vector<CheckResult> check_sweep_shape(const std::vector<SweepRecord>& records) {
  bool all_ok = std::all_of(records.begin(), records.end(),
                            [](const SweepRecord& r) { return r.ok(); });
  // (i) monotone ARL
  double worst_rise = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].arl_closed && records[i - 1].arl_closed) {
      worst_rise = std::max(worst_rise, *records[i].arl_closed - *records[i - 1].arl_closed);
    }
  }
  CheckResult mono = make("sweep_monotone_arl", worst_rise, 0.0);
  mono.passed = all_ok && worst_rise <= 0.0;

  // (ii) exactly one flat positive-root column
  std::size_t columns = records.empty() ? 0 : 4;
  for (const auto& r : records) columns = std::min(columns, r.roots_r.size());
  int flat = 0, varying = -1;
  for (std::size_t c = 0; c < columns; ++c) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : records) {
      lo = std::min(lo, r.roots_r[c]);
      hi = std::max(hi, r.roots_r[c]);
    }
    if ((hi - lo) / hi < 1e-6) {
      ++flat;
    } else {
      varying = static_cast<int>(c);
    }
  }
  CheckResult spurious = make("sweep_single_flat_root", std::abs(flat - 1), 0.5,
                              std::to_string(flat) + " flat column(s)");

  // (iii) noise-dependent roots of R and R' coincide
  double worst = varying < 0 ? std::numeric_limits<double>::infinity() : 0.0;
  if (varying >= 0) {
    for (const auto& r : records) {
      double best = std::numeric_limits<double>::infinity();
      for (double z : r.roots_rp) best = std::min(best, rel_err(r.roots_r[varying], z));
      worst = std::max(worst, best);
    }
  }
  return {mono, spurious, make("sweep_r_rp_coincide", worst, 1e-6)};
}

}  // namespace

Scenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const auto uni = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  };
  Scenario s;
  s.geometry.num_sensors = std::uniform_int_distribution<int>(4, 16)(gen);
  s.geometry.wavelength = 1.0;
  s.geometry.spacing = uni(0.25, 0.5);
  const FresnelBounds fb = fresnel_interval(s.geometry);
  PhysicalParams phys;
  phys.theta_ff = uni(-1.3, 1.3);
  do {
    phys.theta_nf = uni(-1.3, 1.3);
  } while (std::abs(phys.theta_nf - phys.theta_ff) < 0.02);
  phys.range = uni(fb.r_min, fb.r_max);
  s.electrical = physical_to_electrical(phys, s.geometry);
  const auto T = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 100)(gen));
  s.signals = make_signals(T, uni(0.5, 10.0), gen());
  s.sigma2 = std::pow(10.0, uni(-3.0, 1.0));
  return s;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-4s %-28s measured=%-12.4e bound=%-10.3e ",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                  c.threshold);
    out << buf << c.detail << '\n';
  }
  return out.str();
}

ValidationReport run_validation(const ExperimentConfig& config,
                                const ValidationOptions& opts) {
  ValidationReport report;
  auto& out = report.checks;
  const auto guarded = [&](const char* name, double bound, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      out.push_back(failed(name, bound, e));
    }
  };

  guarded("crb_equivalence", 1e-9, [&] { out.push_back(check_crb_equivalence(opts)); });
  guarded("derivative_correctness", 1e-8, [&] { out.push_back(check_derivatives(opts)); });

  std::vector<SweepPoint> pts;
  guarded("quartic_integrity", 1e-9, [&] {
    pts = sweep_points(config, opts);
    for (auto& c : check_quartic_integrity(pts)) out.push_back(std::move(c));
  });
  guarded("arl_three_way", 1e-8, [&] {
    if (pts.empty()) throw Error(ErrorCode::kInvalidArgument, "no sweep points");
    for (auto& c : check_three_way(config, pts)) out.push_back(std::move(c));
  });
  guarded("o_sigma_law", 1.01, [&] { out.push_back(check_o_sigma(config)); });
  guarded("low_noise_approximation", 0.01, [&] { out.push_back(check_low_noise(config)); });

  std::vector<SweepRecord> records;
  guarded("sweep_shape", 1e-6, [&] {
    records = run_sweep(config, opts.threads);
    for (auto& c : check_sweep_shape(records)) out.push_back(std::move(c));
  });
  guarded("determinism", 0.5, [&] {
    const std::string a = records.empty() ? format_csv(run_sweep(config, opts.threads))
                                          : format_csv(records);
    const std::string b = format_csv(run_sweep(config, 1));
    out.push_back(make("determinism", a == b ? 0.0 : 1.0, 0.5,
                       "serial vs repeated sweep CSV"));
  });
  return report;
}

}  // namespace arlkit

#include "arlkit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "arlkit/errors.hpp"

namespace arlkit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

// Accepts a plain number or [k*]pi[/x].
std::optional<double> to_angle(std::string_view s) {
  s = trim(s);
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) return to_double(s);
  double value = kPi;
  std::string_view head = trim(s.substr(0, pos));
  std::string_view tail = trim(s.substr(pos + 2));
  if (!head.empty()) {
    if (head.back() != '*') return std::nullopt;
    const auto k = to_double(head.substr(0, head.size() - 1));
    if (!k) return std::nullopt;
    value *= *k;
  }
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    const auto x = to_double(tail.substr(1));
    if (!x || *x == 0.0) return std::nullopt;
    value /= *x;
  }
  return value;
}

template <typename Int>
std::optional<Int> to_int(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<bool> to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  return std::nullopt;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

void invalid(const std::string& what) {
  throw Error(ErrorCode::kConfigValidation, "invalid config: " + what);
}

using Setter = std::function<bool(ExperimentConfig&, std::string_view)>;

template <typename T, typename Parse>
Setter field(T ExperimentConfig::*section, auto member, Parse parse) {
  return [=](ExperimentConfig& c, std::string_view v) {
    const auto parsed = parse(v);
    if (!parsed) return false;
    (c.*section).*member = *parsed;
    return true;
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  using C = ExperimentConfig;
  static const std::map<std::string, Setter, std::less<>> table = {
      {"geometry.L", field(&C::geometry, &C::Geometry::num_sensors, to_int<int>)},
      {"geometry.d_meters", field(&C::geometry, &C::Geometry::spacing_m, to_double)},
      {"geometry.f0_hertz", field(&C::geometry, &C::Geometry::carrier_hz, to_double)},
      {"geometry.c_mps", field(&C::geometry, &C::Geometry::speed_mps, to_double)},
      {"scenario.theta_ff_radians", field(&C::scenario, &C::Source::theta_ff, to_angle)},
      {"scenario.theta_nf_radians", field(&C::scenario, &C::Source::theta_nf, to_angle)},
      {"scenario.range_mode",
       [](C& c, std::string_view v) {
         v = trim(v);
         if (v == "explicit") {
           c.scenario.range_mode = RangeMode::kExplicit;
         } else if (v == "fresnel_fraction") {
           c.scenario.range_mode = RangeMode::kFresnelFraction;
         } else {
           return false;
         }
         return true;
       }},
      {"scenario.range_meters", field(&C::scenario, &C::Source::range_m, to_double)},
      {"scenario.range_fraction",
       field(&C::scenario, &C::Source::range_fraction, to_double)},
      {"scenario.amp_ratio", field(&C::scenario, &C::Source::amp_ratio, to_double)},
      {"scenario.T", field(&C::scenario, &C::Source::snapshots, to_int<int>)},
      {"scenario.seed", field(&C::scenario, &C::Source::seed, to_int<std::uint64_t>)},
      {"sweep.inv_sigma2_start",
       field(&C::sweep, &C::Sweep::inv_sigma2_start, to_double)},
      {"sweep.inv_sigma2_stop", field(&C::sweep, &C::Sweep::inv_sigma2_stop, to_double)},
      {"sweep.num_points", field(&C::sweep, &C::Sweep::num_points, to_int<int>)},
      {"sweep.log_spacing", field(&C::sweep, &C::Sweep::log_spacing, to_bool)},
      {"solver.delta_max", field(&C::solver, &C::Solver::delta_max, to_double)},
      {"solver.delta_min", field(&C::solver, &C::Solver::delta_min, to_double)},
      {"solver.tol", field(&C::solver, &C::Solver::tol, to_double)},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (geometry.num_sensors < 3) {
    invalid("geometry.L must be >= 3 (omega1, omega2, phi identifiability)");
  }
  if (!positive(geometry.spacing_m)) invalid("geometry.d_meters must be > 0");
  if (!positive(geometry.carrier_hz)) invalid("geometry.f0_hertz must be > 0");
  if (!positive(geometry.speed_mps)) invalid("geometry.c_mps must be > 0");
  if (!(std::abs(scenario.theta_ff) < kPi / 2) ||
      !(std::abs(scenario.theta_nf) < kPi / 2)) {
    invalid("scenario angles must lie in (-pi/2, pi/2)");
  }
  if (scenario.range_mode == RangeMode::kExplicit && !positive(scenario.range_m)) {
    invalid("scenario.range_meters must be > 0 in explicit range mode");
  }
  if (scenario.range_mode == RangeMode::kFresnelFraction &&
      !(scenario.range_fraction > 0.0 && scenario.range_fraction < 1.0)) {
    invalid("scenario.range_fraction must lie in (0, 1)");
  }
  if (!positive(scenario.amp_ratio)) invalid("scenario.amp_ratio must be > 0");
  if (scenario.snapshots < 1) invalid("scenario.T must be >= 1");
  if (sweep.num_points < 2) invalid("sweep.num_points must be >= 2");
  if (!positive(sweep.inv_sigma2_start) || !positive(sweep.inv_sigma2_stop)) {
    invalid("sweep bounds must be > 0");
  }
  if (!(sweep.inv_sigma2_start < sweep.inv_sigma2_stop)) {
    invalid("sweep.inv_sigma2_start must be < sweep.inv_sigma2_stop");
  }
  if (!(solver.delta_max >= 0.0) || !std::isfinite(solver.delta_max)) {
    invalid("solver.delta_max must be >= 0 (0 = automatic)");
  }
  if (!positive(solver.delta_min)) invalid("solver.delta_min must be > 0");
  if (!positive(solver.tol)) invalid("solver.tol must be > 0");
  const double dmax = solver.delta_max > 0.0
                          ? solver.delta_max
                          : kPi / (geometry.num_sensors - 1);
  if (!(solver.delta_min < dmax)) {
    invalid("solver.delta_min must be < solver.delta_max");
  }
}

SmithOptions ExperimentConfig::smith_options() const {
  SmithOptions opts;
  opts.delta_max = solver.delta_max;
  opts.delta_min = solver.delta_min;
  opts.tol = solver.tol;
  return opts;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto where = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigParse,
                  where + ": expected `section.key = value`");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(ErrorCode::kConfigParse,
                  where + ": unknown key '" + std::string(key) + "'");
    }
    if (!it->second(cfg, value)) {
      throw Error(ErrorCode::kConfigParse, where + ": bad value '" +
                                               std::string(value) + "' for '" +
                                               std::string(key) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "geometry.L = " << c.geometry.num_sensors << '\n'
      << "geometry.d_meters = " << fmt_double(c.geometry.spacing_m) << '\n'
      << "geometry.f0_hertz = " << fmt_double(c.geometry.carrier_hz) << '\n'
      << "geometry.c_mps = " << fmt_double(c.geometry.speed_mps) << '\n'
      << "scenario.theta_ff_radians = " << fmt_double(c.scenario.theta_ff) << '\n'
      << "scenario.theta_nf_radians = " << fmt_double(c.scenario.theta_nf) << '\n'
      << "scenario.range_mode = "
      << (c.scenario.range_mode == RangeMode::kExplicit ? "explicit"
                                                         : "fresnel_fraction")
      << '\n'
      << "scenario.range_meters = " << fmt_double(c.scenario.range_m) << '\n'
      << "scenario.range_fraction = " << fmt_double(c.scenario.range_fraction) << '\n'
      << "scenario.amp_ratio = " << fmt_double(c.scenario.amp_ratio) << '\n'
      << "scenario.T = " << c.scenario.snapshots << '\n'
      << "scenario.seed = " << c.scenario.seed << '\n'
      << "sweep.inv_sigma2_start = " << fmt_double(c.sweep.inv_sigma2_start) << '\n'
      << "sweep.inv_sigma2_stop = " << fmt_double(c.sweep.inv_sigma2_stop) << '\n'
      << "sweep.num_points = " << c.sweep.num_points << '\n'
      << "sweep.log_spacing = " << (c.sweep.log_spacing ? "true" : "false") << '\n'
      << "solver.delta_max = " << fmt_double(c.solver.delta_max) << '\n'
      << "solver.delta_min = " << fmt_double(c.solver.delta_min) << '\n'
      << "solver.tol = " << fmt_double(c.solver.tol) << '\n';
  return out.str();
}

ArrayGeometry build_geometry(const ExperimentConfig& c) {
  return ArrayGeometry::from_carrier(c.geometry.num_sensors, c.geometry.spacing_m,
                                     c.geometry.carrier_hz, c.geometry.speed_mps);
}

double resolve_range(const ExperimentConfig& c) {
  if (c.scenario.range_mode == RangeMode::kExplicit) return c.scenario.range_m;
  // Interpolates between the two bounds even when they are inverted.
  const FresnelBounds b = fresnel_bounds(build_geometry(c));
  return b.r_min + c.scenario.range_fraction * (b.r_max - b.r_min);
}

Scenario build_scenario(const ExperimentConfig& c, double sigma2) {
  c.validate();
  Scenario s;
  s.geometry = build_geometry(c);
  s.electrical = physical_to_electrical(
      {c.scenario.theta_ff, c.scenario.theta_nf, resolve_range(c)}, s.geometry);
  s.signals = make_signals(static_cast<std::size_t>(c.scenario.snapshots),
                           c.scenario.amp_ratio, c.scenario.seed);
  s.sigma2 = sigma2;
  return s;
}

std::vector<std::string> config_warnings(const ExperimentConfig& c) {
  std::vector<std::string> out;
  const ArrayGeometry geom = build_geometry(c);
  const double ratio = geom.spacing / geom.wavelength;
  if (ratio < 0.01) {
    out.push_back("d/lambda = " + fmt_double(ratio) +
                  " < 0.01: resolution requires extreme SNR");
  }
  const FresnelBounds b = fresnel_bounds(geom);
  if (b.empty()) {
    out.push_back("empty Fresnel region: r_min = " + fmt_double(b.r_min) +
                  " m >= r_max = " + fmt_double(b.r_max) + " m");
  } else {
    const double r = resolve_range(c);
    if (r < b.r_min || r > b.r_max) {
      out.push_back("range " + fmt_double(r) + " m lies outside the Fresnel region");
    }
  }
  return out;
}

std::vector<double> inv_sigma2_grid(const ExperimentConfig& c) {
  const int n = c.sweep.num_points;
  const double a = c.sweep.inv_sigma2_start, b = c.sweep.inv_sigma2_stop;
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = double(i) / (n - 1);
    grid[i] = c.sweep.log_spacing
                  ? std::exp(std::log(a) + t * (std::log(b) - std::log(a)))
                  : a + t * (b - a);
  }
  grid.front() = a;
  grid.back() = b;
  return grid;
}

SweepRecord evaluate_point(const Scenario& base, const ExperimentConfig& config,
                           double inv_sigma2) {
  SweepRecord rec;
  rec.inv_sigma2 = inv_sigma2;
  rec.sigma2 = 1.0 / inv_sigma2;
  std::vector<std::string> failures;
  const auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      const std::string name(error_code_name(e.code()));
      if (std::find(failures.begin(), failures.end(), name) == failures.end()) {
        failures.push_back(name);
      }
    }
  };

  const Scenario scenario = base.with_sigma2(rec.sigma2);
  std::optional<LinearCoeffs> coeffs;
  attempt([&] { coeffs = linear_coeffs(scenario); });
  if (coeffs) {
    attempt([&] {
      const QuarticRoots q = solve_quartic(coeffs->g0, coeffs->g1, coeffs->g2,
                                           coeffs->g3);
      rec.roots_r = q.positive_real_roots;
    });
    attempt([&] {
      const BiquadraticRoots bq = solve_biquadratic(*coeffs);
      rec.discriminant = bq.discriminant;
      for (double z : {bq.z_plus, bq.z_minus}) {
        if (z > 0.0) rec.roots_rp.push_back(std::sqrt(z));
      }
      std::sort(rec.roots_rp.begin(), rec.roots_rp.end());
    });
    attempt([&] { rec.arl_closed = arl_closed_form(*coeffs); });
    attempt([&] { rec.arl_low_noise = arl_low_noise(*coeffs); });
  }
  attempt([&] { rec.arl_numeric = smith_numeric(scenario, config.smith_options()); });

  if (!failures.empty()) {
    rec.status.clear();
    for (const auto& f : failures) {
      if (!rec.status.empty()) rec.status += '+';
      rec.status += f;
    }
  }
  return rec;
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig& config,
                                   unsigned threads) {
  const std::vector<double> grid = inv_sigma2_grid(config);
  const Scenario base = build_scenario(config, 1.0);
  std::vector<SweepRecord> records(grid.size());

  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      records[i] = evaluate_point(base, config, grid[i]);
    }
    return records;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
          records[i] = evaluate_point(base, config, grid[i]);
        }
      });
    }
  }
  return records;
}

std::string format_csv(const std::vector<SweepRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  const auto num = [&](const std::optional<double>& v) {
    out += ',';
    if (v) out += fmt_sci(*v);
  };
  const auto padded = [&](const std::vector<double>& v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      num(i < v.size() ? std::optional<double>(v[i]) : std::nullopt);
    }
  };
  for (const auto& r : records) {
    out += fmt_sci(r.inv_sigma2);
    num(r.sigma2);
    num(r.arl_closed);
    num(r.arl_low_noise);
    num(r.arl_numeric);
    padded(r.roots_r, 4);
    padded(r.roots_rp, 2);
    num(r.discriminant);
    out += ',';
    out += r.status;
    out += '\n';
  }
  return out;
}

void write_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  if (records.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no sweep records to write");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open for writing: " + path);
  const std::string text = format_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace arlkit

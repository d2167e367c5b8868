#pragma once

// Experiment configuration, the 1/sigma2 sweep and its CSV output.
//
// Config grammar: one `section.key = value` per line, `#` starts a comment,
// blank lines ignored. Angles accept `pi`, `pi/x`, `k*pi` and `k*pi/x`.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arlkit/array_model.hpp"
#include "arlkit/solver.hpp"

namespace arlkit {

enum class RangeMode { kExplicit, kFresnelFraction };

struct ExperimentConfig {
  struct Geometry {
    int num_sensors = 10;
    double spacing_m = 0.0125;
    double carrier_hz = 1.0e7;
    double speed_mps = kSpeedOfLight;
    bool operator==(const Geometry&) const = default;
  } geometry;

  struct Source {
    double theta_ff = kPi / 3.0;
    double theta_nf = kPi / 3.1;
    RangeMode range_mode = RangeMode::kFresnelFraction;
    double range_m = 0.0;
    double range_fraction = 0.5;
    double amp_ratio = 10.0;
    int snapshots = 100;
    std::uint64_t seed = 1;
    bool operator==(const Source&) const = default;
  } scenario;

  struct Sweep {
    double inv_sigma2_start = 1.0e9;
    double inv_sigma2_stop = 1.0e15;
    int num_points = 50;
    bool log_spacing = true;
    bool operator==(const Sweep&) const = default;
  } sweep;

  struct Solver {
    double delta_max = 0.0;  // 0 selects pi / (L - 1)
    double delta_min = 1.0e-12;
    double tol = 1.0e-12;
    bool operator==(const Solver&) const = default;
  } solver;

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws kConfigValidation naming the violated invariant.
  void validate() const;

  SmithOptions smith_options() const;
};

/// Parses config text. Throws kConfigParse (with line and key) or
/// kConfigValidation.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws kIo when unreadable.
ExperimentConfig load_config(const std::string& path);

/// Every key, full precision; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

ArrayGeometry build_geometry(const ExperimentConfig& config);
double resolve_range(const ExperimentConfig& config);
Scenario build_scenario(const ExperimentConfig& config, double sigma2);

/// Human-readable warnings about the configured geometry.
std::vector<std::string> config_warnings(const ExperimentConfig& config);

/// 1/sigma2 grid in ascending order.
std::vector<double> inv_sigma2_grid(const ExperimentConfig& config);

struct SweepRecord {
  double inv_sigma2 = 0.0;
  double sigma2 = 0.0;
  std::optional<double> arl_closed;
  std::optional<double> arl_low_noise;
  std::optional<double> arl_numeric;
  std::vector<double> roots_r;   // positive real roots of R, ascending (<= 4)
  std::vector<double> roots_rp;  // positive real roots of R', ascending (<= 2)
  std::optional<double> discriminant;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Evaluates one grid point. Failures land in `status`, never thrown.
SweepRecord evaluate_point(const Scenario& base, const ExperimentConfig& config,
                           double inv_sigma2);

/// One record per grid point, ascending 1/sigma2. `threads` <= 1 runs serially.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& config,
                                   unsigned threads = 1);

inline constexpr std::string_view kCsvHeader =
    "inv_sigma2,sigma2,arl_closed,arl_low_noise,arl_numeric,"
    "root_R_1,root_R_2,root_R_3,root_R_4,root_Rp_1,root_Rp_2,"
    "discriminant,status";

std::string format_csv(const std::vector<SweepRecord>& records);

/// Throws kInvalidArgument on empty input and kIo on write failure.
void write_csv(const std::vector<SweepRecord>& records, const std::string& path);

}  // namespace arlkit

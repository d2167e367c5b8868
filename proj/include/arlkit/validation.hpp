#pragma once

// Cross-checks between the independent computation routes, run against a
// configured scenario: closed-form CRB vs inverted FIM, analytic vs finite
// difference derivatives, quartic vs biquadratic vs exact Smith root, the
// O(sigma) law, the low-noise approximation, sweep shape and determinism.

#include <string>
#include <vector>

#include "arlkit/experiment.hpp"

namespace arlkit {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed error or ratio
  double threshold = 0.0;  // bound it was compared against
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::string to_text() const;
};

struct ValidationOptions {
  /// Relative perturbation applied to g0 before the quartic is solved.
  /// Non-zero values exist to demonstrate that the agreement checks bite.
  double g0_corruption = 0.0;
  unsigned threads = 1;
  std::uint64_t random_seed = 20240601;
};

/// Random admissible scenario: L in [4, 16], T in [1, 100], half-wavelength
/// class spacing, range inside the Fresnel region, log-uniform sigma2.
Scenario random_scenario(std::uint64_t seed);

ValidationReport run_validation(const ExperimentConfig& config,
                                const ValidationOptions& opts = {});

}  // namespace arlkit

// arlkit: angular resolution limit for a mixed far-field / near-field pair.
//
//   arlkit sweep    [--config F] [--out F.csv] [--seed N] [--threads N]
//   arlkit crb      [--config F] [--sigma2 S] [--seed N]
//   arlkit arl      [--config F] [--sigma2 S] [--seed N]
//   arlkit validate [--config F] [--seed N]
//
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 I/O error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"
#include "arlkit/experiment.hpp"
#include "arlkit/fim.hpp"
#include "arlkit/solver.hpp"
#include "arlkit/validation.hpp"

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfigError = 2, kIoError = 3 };

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

arlkit::ExperimentConfig load(const Common& common) {
  arlkit::ExperimentConfig cfg = common.config_path.empty()
                                     ? arlkit::ExperimentConfig{}
                                     : arlkit::load_config(common.config_path);
  if (common.seed) cfg.scenario.seed = *common.seed;
  cfg.validate();
  if (!common.quiet) {
    for (const auto& w : arlkit::config_warnings(cfg)) {
      std::cerr << "warning: " << w << '\n';
    }
  }
  return cfg;
}

void print_matrix(const char* title, const arlkit::Matrix3& m) {
  std::printf("%s\n", title);
  for (const auto& row : m) {
    std::printf("  % .10e  % .10e  % .10e\n", row[0], row[1], row[2]);
  }
}

int run_crb(const arlkit::ExperimentConfig& cfg, double sigma2) {
  using namespace arlkit;
  const Scenario s = build_scenario(cfg, sigma2);
  std::printf("omega1 = %.10e  delta = %.10e  phi = %.10e  sigma2 = %.6e\n",
              s.electrical.omega1, s.electrical.delta, s.electrical.phi, sigma2);
  const FisherMatrix fim = fim_slepian_bangs(s);
  print_matrix("FIM (omega1, omega2, phi):", fim.entries);
  const CrbNumeric num = crb_numeric(fim);
  const CrbSet cf = crb_closed_form(s);
  std::printf("%-14s %-22s %-22s\n", "", "closed form", "FIM inverse");
  std::printf("%-14s %-22.12e %-22.12e\n", "CRB(omega1)", cf.crb_omega1, num.crb_omega1);
  std::printf("%-14s %-22.12e %-22.12e\n", "CRB(omega2)", cf.crb_omega2, num.crb_omega2);
  std::printf("%-14s %-22.12e %-22.12e\n", "CRB(w1,w2)", cf.crb_cross, num.crb_cross_12);
  std::printf("%-14s %-22.12e %-22.12e\n", "CRB(delta)", cf.crb_delta,
              crb_delta_numeric(num));
  std::printf("%-14s %-22s %-22.12e\n", "CRB(phi)", "-", num.crb_phi);
  std::printf("rcond = %.3e\n", num.rcond);
  return kOk;
}

int run_arl(const arlkit::ExperimentConfig& cfg, double sigma2) {
  using namespace arlkit;
  const Scenario s = build_scenario(cfg, sigma2);
  const ArlResult r = compute_arl(s, cfg.smith_options());
  std::printf("sigma2         = %.6e\n", sigma2);
  std::printf("discriminant   = %.12e\n", r.discriminant);
  std::printf("arl_closed     = %.12e\n", r.arl_closed);
  std::printf("arl_quartic    = %.12e\n", r.arl_quartic);
  std::printf("arl_low_noise  = %.12e\n", r.arl_low_noise);
  std::printf("arl_numeric    = %.12e\n", r.arl_numeric);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angular resolution limit for coexisting far-field and near-field sources"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Config file (section.key = value)");
    sub->add_option("--seed", common.seed, "Override scenario.seed");
    sub->add_flag("--quiet", common.quiet, "Suppress warnings");
  };

  std::string out_path;
  unsigned threads = 1;
  std::optional<double> sigma2;

  auto* sweep = app.add_subcommand("sweep", "Run the 1/sigma2 sweep and emit CSV");
  add_common(sweep);
  sweep->add_option("--out", out_path, "CSV output path (stdout if omitted)");
  sweep->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

  auto* crb = app.add_subcommand("crb", "Print FIM and CRBs for one noise level");
  add_common(crb);
  crb->add_option("--sigma2", sigma2, "Noise variance (default 1/sweep.inv_sigma2_start)");

  auto* arl = app.add_subcommand("arl", "Print the ARL computed three ways");
  add_common(arl);
  arl->add_option("--sigma2", sigma2, "Noise variance (default 1/sweep.inv_sigma2_start)");

  auto* validate = app.add_subcommand("validate", "Run the cross-check suite");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    const arlkit::ExperimentConfig cfg = load(common);
    const double s2 = sigma2.value_or(1.0 / cfg.sweep.inv_sigma2_start);
    if (*sweep) {
      const auto records = arlkit::run_sweep(cfg, threads);
      if (out_path.empty()) {
        std::cout << arlkit::format_csv(records);
      } else {
        arlkit::write_csv(records, out_path);
      }
      return kOk;
    }
    if (*crb) return run_crb(cfg, s2);
    if (*arl) return run_arl(cfg, s2);
    if (*validate) {
      const auto report = arlkit::run_validation(cfg);
      std::cout << report.to_text();
      return report.all_passed() ? kOk : kValidationFailed;
    }
  } catch (const arlkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case arlkit::ErrorCode::kConfigParse:
      case arlkit::ErrorCode::kConfigValidation:
      case arlkit::ErrorCode::kInvalidArgument:
        return kConfigError;
      case arlkit::ErrorCode::kIo:
        return kIoError;
      default:
        return kValidationFailed;
    }
  }
  return kOk;
}

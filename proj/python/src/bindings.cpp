#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"
#include "arlkit/experiment.hpp"
#include "arlkit/fim.hpp"
#include "arlkit/linearization.hpp"
#include "arlkit/solver.hpp"
#include "arlkit/validation.hpp"

namespace py = pybind11;
using namespace arlkit;

namespace {

// Every entry point takes config text, so Python never has to mirror the
// config struct.
Scenario scenario_for(const std::string& config, double sigma2) {
  return build_scenario(parse_config(config), sigma2);
}

py::dict record_dict(const SweepRecord& r) {
  py::dict d;
  d["inv_sigma2"] = r.inv_sigma2;
  d["sigma2"] = r.sigma2;
  d["arl_closed"] = r.arl_closed;
  d["arl_low_noise"] = r.arl_low_noise;
  d["arl_numeric"] = r.arl_numeric;
  d["roots_r"] = r.roots_r;
  d["roots_rp"] = r.roots_rp;
  d["discriminant"] = r.discriminant;
  d["status"] = r.status;
  return d;
}

}  // namespace

PYBIND11_MODULE(_arlkit, m) {
  m.doc() = "Angular resolution limit for a far-field / near-field source pair";

  static py::handle exc = py::exception<Error>(m, "ArlkitError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string code(error_code_name(e.code()));
      py::object inst = exc(py::str(code + ": " + e.what()));
      inst.attr("code") = code;
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  m.def("default_config", [] { return serialize_config(ExperimentConfig{}); },
        "Default configuration as config text.");
  m.def("normalize_config", [](const std::string& text) {
    return serialize_config(parse_config(text));
  }, py::arg("text"));

  m.def("steering_ff", &steering_ff, py::arg("omega1"), py::arg("L"));
  m.def("steering_nf", &steering_nf, py::arg("omega2"), py::arg("phi"), py::arg("L"));
  m.def("electrical", [](const std::string& config) {
    const ElectricalParams e = scenario_for(config, 1.0).electrical;
    return py::dict(py::arg("omega1") = e.omega1, py::arg("delta") = e.delta,
                    py::arg("phi") = e.phi, py::arg("omega2") = e.omega2());
  }, py::arg("config") = "");

  m.def("crb", [](const std::string& config, double sigma2) {
    const Scenario s = scenario_for(config, sigma2);
    const CrbSet cf = crb_closed_form(s);
    const CrbNumeric num = crb_numeric(fim_slepian_bangs(s));
    py::dict d;
    d["omega1"] = cf.crb_omega1;
    d["omega2"] = cf.crb_omega2;
    d["cross"] = cf.crb_cross;
    d["delta"] = cf.crb_delta;
    d["numeric_omega1"] = num.crb_omega1;
    d["numeric_omega2"] = num.crb_omega2;
    d["numeric_cross"] = num.crb_cross_12;
    d["numeric_delta"] = crb_delta_numeric(num);
    return d;
  }, py::arg("config") = "", py::arg("sigma2") = 1e-9);

  m.def("solve_quartic", [](double g0, double g1, double g2, double g3) {
    const QuarticRoots q = solve_quartic(g0, g1, g2, g3);
    return std::vector<cplx>(q.roots.begin(), q.roots.end());
  }, py::arg("g0"), py::arg("g1"), py::arg("g2"), py::arg("g3"),
        "Roots of x^4 + g3 x^3 + g2 x^2 + g1 x + g0.");

  m.def("arl", [](const std::string& config, double sigma2) {
    const ExperimentConfig c = parse_config(config);
    const ArlResult r = compute_arl(build_scenario(c, sigma2), c.smith_options());
    return py::dict(py::arg("closed") = r.arl_closed, py::arg("low_noise") = r.arl_low_noise,
                    py::arg("numeric") = r.arl_numeric, py::arg("quartic") = r.arl_quartic,
                    py::arg("discriminant") = r.discriminant);
  }, py::arg("config") = "", py::arg("sigma2") = 1e-9);

  m.def("sweep", [](const std::string& config, unsigned threads) {
    std::vector<SweepRecord> recs;
    {
      py::gil_scoped_release release;
      recs = run_sweep(parse_config(config), threads);
    }
    py::list out;
    for (const auto& r : recs) out.append(record_dict(r));
    return out;
  }, py::arg("config") = "", py::arg("threads") = 1);

  m.def("sweep_csv", [](const std::string& config, unsigned threads) {
    py::gil_scoped_release release;
    return format_csv(run_sweep(parse_config(config), threads));
  }, py::arg("config") = "", py::arg("threads") = 1,
        "Sweep rendered in the CSV layout the plotting tools read.");

  m.def("validate", [](const std::string& config) {
    const ValidationReport r = run_validation(parse_config(config));
    return py::make_tuple(r.all_passed(), r.to_text());
  }, py::arg("config") = "");
}

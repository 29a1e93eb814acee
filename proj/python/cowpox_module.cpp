// Python bindings. Scenarios travel as {key: text} maps using the scenario
// file keys; metrics travel as column dictionaries.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>
#include <vector>

#include "cowpox/commands.hpp"

namespace py = pybind11;
using namespace cowpox;

namespace {

Scenario scenario_from(const std::map<std::string, std::string>& values) {
  Scenario s;
  for (const auto& [k, v] : values) set_scenario_value(s, k, v);
  s.validate();
  return s;
}

py::dict columns(const MetricsTable& table) {
  std::vector<std::uint32_t> round, recovered, carriers_virus, carriers_cure, detections;
  std::vector<double> current, cumulative, beta_t, alpha_q;
  for (const auto& r : table) {
    round.push_back(r.round);
    current.push_back(r.current_rate);
    cumulative.push_back(r.cumulative_rate);
    beta_t.push_back(r.beta_t);
    alpha_q.push_back(r.alpha_q);
    recovered.push_back(r.recovered);
    carriers_virus.push_back(r.carriers_virus);
    carriers_cure.push_back(r.carriers_cure);
    detections.push_back(r.detections);
  }
  py::dict d;
  d["round"] = round;
  d["current_rate"] = current;
  d["cumulative_rate"] = cumulative;
  d["beta_t"] = beta_t;
  d["alpha_q"] = alpha_q;
  d["recovered"] = recovered;
  d["carriers_virus"] = carriers_virus;
  d["carriers_cure"] = carriers_cure;
  d["detections"] = detections;
  return d;
}

py::object optional_round(const std::optional<std::uint32_t>& r) { return r ? py::cast(*r) : py::none(); }

py::dict curve_summary(const CurveSummary& c) {
  py::dict d;
  d["peak_current"] = c.peak_current;
  d["peak_round"] = c.peak_round;
  d["first_round_current_le_0.10"] = optional_round(c.first_current_le_10);
  d["first_round_cumulative_ge_0.85"] = optional_round(c.first_cumulative_ge_85);
  d["first_round_cumulative_ge_0.95"] = optional_round(c.first_cumulative_ge_95);
  d["final_current"] = c.final_current;
  d["final_cumulative"] = c.final_cumulative;
  return d;
}

py::dict trajectory(const Trajectory& tr) {
  py::dict d;
  d["t"] = tr.times;
  d["r"] = tr.r;
  if (tr.rc) d["rc"] = *tr.rc;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cowpox, m) {
  m.doc() = "Agent-based and mean-field simulator of jailbreak spread and Cowpox cures";
  m.attr("__version__") = kArtifactVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("scenario_keys", &scenario_keys, "Every accepted scenario key, in canonical order.");
  m.def(
      "resolve_scenario", [](const std::map<std::string, std::string>& v) { return scenario_values(scenario_from(v)); },
      py::arg("values"), "Defaults overridden by `values`, validated, as canonical key -> text.");
  m.def(
      "load_scenario", [](const std::filesystem::path& p) { return scenario_values(load_scenario(p)); },
      py::arg("path"), "Reads a scenario file and returns its resolved key -> text map.");

  m.def(
      "run",
      [](const std::map<std::string, std::string>& v, std::uint32_t replicate) {
        const Scenario s = scenario_from(v);
        EngineConfig c = s.engine;
        c.seed = s.replicate_seed(replicate);
        c.record_pairs = false;
        MetricsTable table;
        {
          py::gil_scoped_release release;
          table = run(c).metrics;
        }
        return columns(table);
      },
      py::arg("values") = std::map<std::string, std::string>{}, py::arg("replicate") = 0,
      "Runs one replicate and returns its metrics as columns.");

  m.def(
      "run_replicates",
      [](const std::map<std::string, std::string>& v, unsigned jobs) {
        const Scenario s = scenario_from(v);
        std::vector<RunResult> results;
        {
          py::gil_scoped_release release;
          results = run_replicates(s, jobs, false);
        }
        py::list out;
        for (const auto& r : results) out.append(columns(r.metrics));
        return out;
      },
      py::arg("values") = std::map<std::string, std::string>{}, py::arg("jobs") = 0,
      "Runs every replicate; returns one column dictionary per replicate.");

  m.def(
      "run_to_dir",
      [](const std::map<std::string, std::string>& v, const std::filesystem::path& out, bool events) {
        const Scenario s = scenario_from(v);
        RunOutput r;
        {
          py::gil_scoped_release release;
          r = cmd_run(s, RunOptions{out, events, 0});
        }
        py::dict d;
        d["mean"] = curve_summary(r.summary.mean);
        d["median"] = curve_summary(r.summary.median);
        d["manifest"] = r.manifest;
        return d;
      },
      py::arg("values"), py::arg("out"), py::arg("events") = false,
      "Writes the run artifacts (metrics CSVs, aggregate, summary, manifest) under `out`.");

  m.def(
      "compare",
      [](const std::filesystem::path& run_dir) {
        const CompareOutput c = cmd_compare(run_dir);
        py::dict d;
        d["gap_r"] = c.gap_r;
        d["gap_rc"] = c.gap_rc ? py::cast(*c.gap_rc) : py::none();
        d["gap_r_all"] = c.gap_r_all;
        d["replicates_used"] = c.replicates_used;
        d["self_recovery"] = c.self_recovery;
        d["warnings"] = c.warnings;
        d["round"] = c.rounds;
        d["sim_r"] = c.sim_r;
        d["mf_r"] = c.mf_r;
        return d;
      },
      py::arg("run_dir"), "Agent-based vs mean-field comparison of a run written with events.");

  m.def(
      "read_metrics_csv", [](const std::filesystem::path& p) { return columns(read_metrics_csv(p)); },
      py::arg("path"), "Reads a metrics CSV into columns.");

  m.def(
      "sir_rhs", [](double r, double beta, double gamma) { return sir_rhs(r, SirParams{beta, gamma, 0.0}); },
      py::arg("r"), py::arg("beta"), py::arg("gamma"));
  m.def(
      "cowpox_rhs",
      [](double m_, double n, double beta, double epsilon, double eta) {
        return cowpox_rhs(m_, n, CowpoxParams{beta, epsilon, epsilon, eta, 0.0, 0.0});
      },
      py::arg("m"), py::arg("n"), py::arg("beta"), py::arg("epsilon"), py::arg("eta"));
  m.def(
      "integrate_sir",
      [](double beta, double gamma, double r0, double dt, double t_end, std::size_t record_every) {
        return trajectory(integrate_sir(SirParams{beta, gamma, r0}, IntegrationOptions{dt, t_end, record_every}));
      },
      py::arg("beta"), py::arg("gamma"), py::arg("r0"), py::arg("dt") = 0.1, py::arg("t_end") = 100.0,
      py::arg("record_every") = 1);
  m.def(
      "integrate_cowpox",
      [](double beta, double epsilon, double eta, double r0, double rc0, double dt, double t_end,
         std::size_t record_every) {
        return trajectory(integrate_cowpox(CowpoxParams{beta, epsilon, epsilon, eta, r0, rc0},
                                           IntegrationOptions{dt, t_end, record_every}));
      },
      py::arg("beta"), py::arg("epsilon"), py::arg("eta"), py::arg("r0"), py::arg("rc0"), py::arg("dt") = 0.1,
      py::arg("t_end") = 100.0, py::arg("record_every") = 1);
  m.def(
      "stationary_class",
      [](double beta, double epsilon, double eta) {
        return std::string(to_string(stationary_analysis(CowpoxParams{beta, epsilon, epsilon, eta, 0.1, 0.05})
                                         .classification));
      },
      py::arg("beta"), py::arg("epsilon"), py::arg("eta"));
}

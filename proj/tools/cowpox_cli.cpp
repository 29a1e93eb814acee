// cowpox: run, sweep, meanfield and compare subcommands.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cowpox/commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> replicates;
  bool events = false;
  std::string out;
  unsigned jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--scenario", f.scenario, "Scenario file (YAML); defaults apply when omitted");
  cmd->add_option("--seed", f.seed, "Override the scenario seed");
  cmd->add_option("--replicates", f.replicates, "Override the replicate count")->check(CLI::PositiveNumber);
  cmd->add_flag("--events", f.events, "Also write compressed per-round event logs");
  cmd->add_option("--out", f.out, "Output directory (default: output_dir from the scenario)");
  cmd->add_option("--jobs", f.jobs, "Worker threads for replicates (0 = all cores)");
}

cowpox::Scenario resolve(const CommonFlags& f) {
  cowpox::Scenario s = f.scenario.empty() ? cowpox::Scenario{} : cowpox::load_scenario(f.scenario);
  if (f.seed) s.engine.seed = *f.seed;
  if (f.replicates) s.replicates = *f.replicates;
  if (!f.out.empty()) s.output_dir = f.out;
  s.validate();
  return s;
}

cowpox::RunOptions options_for(const cowpox::Scenario& s, const CommonFlags& f) {
  return cowpox::RunOptions{s.output_dir, f.events, f.jobs};
}

// Parses sweep values strictly: CLI11 would read an empty item as 0.
std::vector<std::uint32_t> parse_values(const std::vector<std::string>& raw) {
  std::vector<std::uint32_t> out;
  for (const auto& v : raw) {
    std::size_t used = 0;
    unsigned long x = 0;
    try {
      x = std::stoul(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (v.empty() || used != v.size() || v[0] == '-' || x > UINT32_MAX) {
      throw cowpox::ConfigError("values", "not a non-negative integer: '" + v + "'");
    }
    out.push_back(static_cast<std::uint32_t>(x));
  }
  return out;
}

std::string round_or_dash(const std::optional<std::uint32_t>& r) { return r ? std::to_string(*r) : "-"; }

void print_summary(const cowpox::CurveSummary& c) {
  std::printf("peak current %.4f at round %u; current <= 0.10 after peak: %s; cumulative >= 0.85: %s, >= 0.95: %s; "
              "final cumulative %.4f\n",
              c.peak_current, c.peak_round, round_or_dash(c.first_current_le_10).c_str(),
              round_or_dash(c.first_cumulative_ge_85).c_str(), round_or_dash(c.first_cumulative_ge_95).c_str(),
              c.final_cumulative);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based and mean-field simulator of infectious jailbreak spread and Cowpox cures"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run every replicate of a scenario");
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario for each value of one parameter");
  add_common(sweep, sweep_flags);
  sweep->add_option("--axis", axis, "kappa, album_size, history_len, r0_count or N")->required();
  sweep->add_option("--values", values, "Comma-separated values")->delimiter(',')->required();

  std::string params;
  std::string mf_out = "meanfield_out";
  auto* meanfield = app.add_subcommand("meanfield", "Integrate the mean-field models");
  meanfield->add_option("--params,--scenario", params, "Mean-field parameter file (YAML)")->required();
  meanfield->add_option("--out", mf_out, "Output directory");

  std::string run_dir;
  std::string cmp_out;
  auto* compare = app.add_subcommand("compare", "Compare a run's event logs with the mean-field prediction");
  compare->add_option("run_dir,--run-dir", run_dir, "Directory of a run written with --events")->required();
  compare->add_option("--out", cmp_out, "Output directory (default: the run directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      const auto s = resolve(run_flags);
      const auto out = cowpox::cmd_run(s, options_for(s, run_flags));
      std::printf("wrote %zu replicate(s) to %s\n", out.tables.size(), s.output_dir.c_str());
      std::printf("mean curve: ");
      print_summary(out.summary.mean);
      std::printf("median curve: ");
      print_summary(out.summary.median);
    } else if (*sweep) {
      const auto s = resolve(sweep_flags);
      const auto ax = cowpox::parse_axis(axis);
      const auto points = cowpox::cmd_sweep(s, ax, parse_values(values), options_for(s, sweep_flags));
      for (const auto& p : points) {
        std::printf("%s=%u: ", cowpox::to_string(ax), p.value);
        print_summary(p.summary.median);
      }
    } else if (*meanfield) {
      const auto mf = cowpox::load_meanfield_config(params);
      const auto out = cowpox::cmd_meanfield(mf, mf_out);
      if (!out.grid.empty()) {
        std::printf("extinction grid: %zu points, %s\n", out.grid.size(), out.grid_pass ? "PASS" : "FAIL");
      } else if (out.report) {
        std::printf("classification %s; final r %.6g, rc %.6g\n", cowpox::to_string(out.report->classification),
                    out.trajectory->final_r(), out.trajectory->final_rc());
      } else {
        std::printf("final r %.6g (equilibrium %.6g)\n", out.trajectory->final_r(),
                    cowpox::sir_equilibrium(mf.sir));
      }
      std::printf("wrote %s\n", mf_out.c_str());
    } else if (*compare) {
      const auto out = cowpox::cmd_compare(run_dir, cmp_out);
      for (const auto& w : out.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("L-inf gap over %zu replicate(s) that took off: r %.4f", out.replicates_used, out.gap_r);
      if (out.gap_rc) std::printf(", rc %.4f", *out.gap_rc);
      std::printf("; over all replicates: r %.4f", out.gap_r_all);
      if (out.gap_rc_all) std::printf(", rc %.4f", *out.gap_rc_all);
      std::printf("; self-recovery rate %.4f\n", out.self_recovery);
    }
  } catch (const cowpox::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}

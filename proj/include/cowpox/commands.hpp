#pragma once

// Implementations behind the command-line subcommands. Each writes its
// artifacts under an output directory and returns what it computed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cowpox/io.hpp"
#include "cowpox/meanfield.hpp"
#include "cowpox/scenario.hpp"

namespace cowpox {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunOptions {
  std::filesystem::path out;
  bool events = false;  // write events_<rep>.jsonl.gz
  unsigned jobs = 0;    // worker threads for replicates; 0 = hardware concurrency
};

struct RunOutput {
  std::vector<MetricsTable> tables;  // by replicate index
  std::vector<SimStats> stats;
  RunSummary summary;
  std::filesystem::path manifest;
};

/// Runs every replicate of `scenario`. Writes manifest.json (first, then
/// completed with digests), metrics_<rep>.csv, aggregate.csv and summary.json.
RunOutput cmd_run(const Scenario& scenario, const RunOptions& options);

/// Runs the replicates without touching the filesystem.
std::vector<RunResult> run_replicates(const Scenario& scenario, unsigned jobs = 0, bool record_pairs = true);

enum class SweepAxis { Kappa, AlbumSize, HistoryLen, R0Count, N };

SweepAxis parse_axis(const std::string& name);
const char* to_string(SweepAxis axis);

struct SweepPoint {
  std::uint32_t value = 0;
  std::vector<MetricsTable> tables;
  RunSummary summary;
};

/// One sub-run per value under <out>/<axis>_<value>/, one aggregate CSV per
/// value at <out>/aggregate_<axis>_<value>.csv and the long-format
/// <out>/sweep_<axis>.csv keyed by axis value.
std::vector<SweepPoint> cmd_sweep(const Scenario& scenario, SweepAxis axis, const std::vector<std::uint32_t>& values,
                                  const RunOptions& options);

/// Mean-field parameter file (YAML):
///   model: sir | cowpox
///   mode: ode | discrete | grid      (cowpox only; default ode)
///   beta, gamma, delta, epsilon, eta, r0, rc0, dt, t_end, rounds, record_every
/// Grid mode ignores beta/epsilon/eta and checks the extinction condition on
/// a 5x5x5 grid.
struct MeanfieldConfig {
  enum class Model { Sir, Cowpox } model = Model::Sir;
  enum class Mode { Ode, Discrete, Grid } mode = Mode::Ode;
  SirParams sir;
  CowpoxParams cowpox;
  IntegrationOptions integration{0.1, 100.0, 10};
  std::uint32_t rounds = 64;  // discrete mode
};

MeanfieldConfig parse_meanfield_config(std::string_view text);
MeanfieldConfig load_meanfield_config(const std::filesystem::path& path);

struct GridPoint {
  double beta = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
  double r0 = 0.0;
  double rc0 = 0.0;
  double final_r = 0.0;
  bool pass = false;
};

/// Extinction check over beta, epsilon, eta in {0.1, 0.3, 0.5, 0.7, 0.9}
/// with epsilon > eta + 0.05, from several initial states with rc0 >= 0.01.
std::vector<GridPoint> extinction_grid(double t_end = 1e4, double dt = 0.1, double tolerance = 1e-3);

struct MeanfieldOutput {
  std::optional<Trajectory> trajectory;
  std::optional<StationaryReport> report;
  std::vector<GridPoint> grid;
  bool grid_pass = true;
};

/// Writes trajectory.csv (t,r[,rc]) and report.json, or grid.csv and
/// report.json in grid mode.
MeanfieldOutput cmd_meanfield(const MeanfieldConfig& mf, const std::filesystem::path& out);

/// Runs below this many agents are flagged: the pair-probability
/// approximation behind the mean-field model needs a large population.
inline constexpr std::uint32_t kSmallPopulation = 128;

struct CompareOutput {
  ParamEstimates estimates;
  double self_recovery = 0.0;  // observed Infected -> Sensitive rate per infected agent-round
  std::vector<std::uint32_t> rounds;
  std::vector<double> sim_r, mf_r;
  std::optional<std::vector<double>> sim_rc, mf_rc;  // absent without cure events
  double gap_r = 0.0;
  std::optional<double> gap_rc;
  // Same gaps over every replicate, including those that never took off.
  double gap_r_all = 0.0;
  std::optional<double> gap_rc_all;
  std::size_t replicates_used = 0;  // replicates behind the curves and gap_r
  std::vector<std::string> warnings;
};

/// Mean-field prediction from event logs of several replicates of one
/// scenario. Transition probabilities are pooled over all logs. Each
/// replicate's prediction iterates the per-round difference equations from
/// its initial ratios; when the first cured agent appears (the first cure is
/// produced by a Cowpox agent, which the equations cannot create) the state
/// is re-anchored to the observed ratios. Gaps are L-infinity distances
/// between replicate-mean curves. The curves and gap_r/gap_rc cover the
/// replicates that took off (at least one transmission to a non-infected
/// agent): a replicate whose seeded infection dies out before spreading has
/// no counterpart in the deterministic equations. gap_r_all/gap_rc_all keep
/// every replicate.
CompareOutput compare_logs(const std::vector<EventLog>& logs, std::uint32_t n_agents);

/// Reads <run_dir>/manifest.json and its event logs; writes compare.csv and
/// compare.json into `out` (defaults to run_dir).
CompareOutput cmd_compare(const std::filesystem::path& run_dir, const std::filesystem::path& out = {});

}  // namespace cowpox

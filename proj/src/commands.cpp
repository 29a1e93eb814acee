#include "cowpox/commands.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace cowpox {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string metrics_name(std::uint32_t rep) { return "metrics_" + std::to_string(rep) + ".csv"; }
std::string events_name(std::uint32_t rep) { return "events_" + std::to_string(rep) + ".jsonl.gz"; }

json optional_json(const std::optional<std::uint32_t>& v) { return v ? json(*v) : json(nullptr); }

json stats_json(const SimStats& s) {
  json j{{"detections", s.detections},
         {"false_positives", s.false_positives},
         {"cures_generated", s.cures_generated},
         {"cure_epochs", s.cure_epochs},
         {"s2_fallbacks", s.s2_fallbacks},
         {"replace_warnings", s.replace_warnings},
         {"first_detection_round", optional_json(s.first_detection_round)}};
  if (s.adaptive) {
    j["adaptive"] = json{{"round", optional_json(s.adaptive_round)},
                         {"success", s.adaptive->success},
                         {"max_cure_score", s.adaptive->max_cure_score},
                         {"virus_score", s.adaptive->new_virus.malicious_score},
                         {"carrier", s.adaptive->carrier}};
  }
  return j;
}

}  // namespace

std::vector<RunResult> run_replicates(const Scenario& scenario, unsigned jobs, bool record_pairs) {
  scenario.validate();
  const std::uint32_t n = scenario.replicates;
  std::vector<RunResult> results(n);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, n);

  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint32_t i = next++; i < n; i = next++) {
      try {
        EngineConfig cfg = scenario.engine;
        cfg.seed = scenario.replicate_seed(i);
        cfg.record_pairs = record_pairs;
        results[i] = run(cfg);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

RunOutput cmd_run(const Scenario& scenario, const RunOptions& options) {
  scenario.validate();
  const auto started = std::chrono::steady_clock::now();
  fs::create_directories(options.out);

  json manifest;
  manifest["artifact"] = "cowpox";
  manifest["version"] = kArtifactVersion;
  manifest["command"] = "run";
  manifest["seed"] = scenario.engine.seed;
  manifest["config"] = scenario_values(scenario);
  manifest["replicates"] = json::array();
  for (std::uint32_t i = 0; i < scenario.replicates; ++i) {
    json rep{{"index", i}, {"seed", scenario.replicate_seed(i)}, {"metrics", metrics_name(i)}};
    if (options.events) rep["events"] = events_name(i);
    manifest["replicates"].push_back(rep);
  }
  manifest["aggregate"] = "aggregate.csv";
  manifest["summary"] = "summary.json";
  manifest["status"] = "running";
  const fs::path manifest_path = options.out / "manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");

  auto results = run_replicates(scenario, options.jobs, options.events);

  RunOutput output;
  json digests = json::object();
  for (std::uint32_t i = 0; i < scenario.replicates; ++i) {
    const fs::path metrics_path = options.out / metrics_name(i);
    write_metrics_csv(metrics_path, results[i].metrics);
    digests[metrics_name(i)] = sha256_file(metrics_path);
    if (options.events) {
      const fs::path events_path = options.out / events_name(i);
      write_event_log(events_path, results[i].log);
      digests[events_name(i)] = sha256_file(events_path);
    }
    manifest["replicates"][i]["stats"] = stats_json(results[i].stats);
    output.tables.push_back(std::move(results[i].metrics));
    output.stats.push_back(std::move(results[i].stats));
  }
  write_aggregate_csv(options.out / "aggregate.csv", output.tables);
  digests["aggregate.csv"] = sha256_file(options.out / "aggregate.csv");
  output.summary = summarize_run(output.tables);
  write_text(options.out / "summary.json", summary_json(output.summary));
  digests["summary.json"] = sha256_file(options.out / "summary.json");

  manifest["digests"] = digests;
  manifest["status"] = "complete";
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(manifest_path, manifest.dump(2) + "\n");
  output.manifest = manifest_path;
  return output;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "kappa") return SweepAxis::Kappa;
  if (name == "album_size") return SweepAxis::AlbumSize;
  if (name == "history_len") return SweepAxis::HistoryLen;
  if (name == "r0_count") return SweepAxis::R0Count;
  if (name == "N") return SweepAxis::N;
  throw ConfigError("axis", "expected one of kappa, album_size, history_len, r0_count, N; got '" + name + "'");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Kappa: return "kappa";
    case SweepAxis::AlbumSize: return "album_size";
    case SweepAxis::HistoryLen: return "history_len";
    case SweepAxis::R0Count: return "r0_count";
    case SweepAxis::N: return "N";
  }
  return "?";
}

std::vector<SweepPoint> cmd_sweep(const Scenario& scenario, SweepAxis axis, const std::vector<std::uint32_t>& values,
                                  const RunOptions& options) {
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  const std::string axis_name = to_string(axis);

  // Validate every point before running any of them.
  std::vector<Scenario> points;
  for (auto v : values) {
    Scenario s = scenario;
    set_scenario_value(s, axis_name, std::to_string(v));
    s.validate();
    points.push_back(std::move(s));
  }

  std::vector<SweepPoint> out;
  std::ostringstream combined;
  bool header_done = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const std::string tag = axis_name + "_" + std::to_string(values[k]);
    RunOptions sub = options;
    sub.out = options.out / tag;
    RunOutput run = cmd_run(points[k], sub);

    std::ostringstream agg;
    write_aggregate_csv(agg, run.tables);
    write_text(options.out / ("aggregate_" + tag + ".csv"), agg.str());

    std::istringstream lines(agg.str());
    std::string line;
    std::getline(lines, line);
    if (!header_done) {
      combined << axis_name << ',' << line << '\n';
      header_done = true;
    }
    while (std::getline(lines, line)) combined << values[k] << ',' << line << '\n';

    out.push_back(SweepPoint{values[k], std::move(run.tables), std::move(run.summary)});
  }
  write_text(options.out / ("sweep_" + axis_name + ".csv"), combined.str());
  return out;
}

MeanfieldConfig parse_meanfield_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("params", std::string("malformed document: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("params", "top level must be a key/value map");
  MeanfieldConfig mf;
  auto real = [](const std::string& key, const YAML::Node& n) {
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(key, "expected a number");
    }
  };
  auto count = [&](const std::string& key, const YAML::Node& n) {
    const double v = real(key, n);
    if (v < 0 || v != std::floor(v)) throw ConfigError(key, "expected a non-negative integer");
    return static_cast<std::uint32_t>(v);
  };
  // The model decides which parameter struct the shared names land in.
  if (root["model"]) {
    const auto m = root["model"].as<std::string>();
    if (m == "sir") {
      mf.model = MeanfieldConfig::Model::Sir;
    } else if (m == "cowpox") {
      mf.model = MeanfieldConfig::Model::Cowpox;
    } else {
      throw ConfigError("model", "expected sir or cowpox, got '" + m + "'");
    }
  }
  const bool sir = mf.model == MeanfieldConfig::Model::Sir;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const auto& v = kv.second;
    if (key == "model") continue;
    if (key == "mode") {
      const auto m = v.as<std::string>();
      if (m == "ode") {
        mf.mode = MeanfieldConfig::Mode::Ode;
      } else if (m == "discrete") {
        mf.mode = MeanfieldConfig::Mode::Discrete;
      } else if (m == "grid") {
        mf.mode = MeanfieldConfig::Mode::Grid;
      } else {
        throw ConfigError("mode", "expected ode, discrete or grid, got '" + m + "'");
      }
    } else if (key == "beta") {
      (sir ? mf.sir.beta : mf.cowpox.beta) = real(key, v);
    } else if (key == "r0") {
      (sir ? mf.sir.r0 : mf.cowpox.r0) = real(key, v);
    } else if (key == "gamma" && sir) {
      mf.sir.gamma = real(key, v);
    } else if (key == "delta" && !sir) {
      mf.cowpox.delta = real(key, v);
    } else if (key == "epsilon" && !sir) {
      mf.cowpox.epsilon = real(key, v);
    } else if (key == "eta" && !sir) {
      mf.cowpox.eta = real(key, v);
    } else if (key == "rc0" && !sir) {
      mf.cowpox.rc0 = real(key, v);
    } else if (key == "dt") {
      mf.integration.dt = real(key, v);
    } else if (key == "t_end") {
      mf.integration.t_end = real(key, v);
    } else if (key == "record_every") {
      mf.integration.record_every = count(key, v);
    } else if (key == "rounds") {
      mf.rounds = count(key, v);
    } else {
      throw ConfigError(key, sir ? "unknown key for the sir model" : "unknown key for the cowpox model");
    }
  }
  if (sir && mf.mode != MeanfieldConfig::Mode::Ode) throw ConfigError("mode", "the sir model supports only ode");
  if (!(mf.integration.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(mf.integration.t_end >= 0.0)) throw ConfigError("t_end", "must be non-negative");
  try {
    if (sir) {
      mf.sir.validate();
    } else {
      mf.cowpox.validate();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  return mf;
}

MeanfieldConfig load_meanfield_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("params", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_meanfield_config(buf.str());
}

std::vector<GridPoint> extinction_grid(double t_end, double dt, double tolerance) {
  static constexpr double kLevels[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  static constexpr std::array<std::array<double, 2>, 4> kStarts{{{0.01, 0.01}, {0.5, 0.01}, {0.3, 0.3}, {0.05, 0.9}}};
  std::vector<GridPoint> out;
  for (double beta : kLevels) {
    for (double eps : kLevels) {
      for (double eta : kLevels) {
        if (!(eps > eta + 0.05)) continue;
        for (const auto& y0 : kStarts) {
          CowpoxParams p{beta, eps, eps, eta, y0[0], y0[1]};
          const auto tr = integrate_cowpox(p, IntegrationOptions{dt, t_end, 1000000000});
          out.push_back(GridPoint{beta, eps, eta, y0[0], y0[1], tr.final_r(), tr.final_r() < tolerance});
        }
      }
    }
  }
  return out;
}

namespace {

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = tr.rc ? "t,r,rc\n" : "t,r\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out += format_real(tr.times[i]) + "," + format_real(tr.r[i]);
    if (tr.rc) out += "," + format_real((*tr.rc)[i]);
    out += "\n";
  }
  return out;
}

json report_json(const StationaryReport& rep) {
  json fps = json::array();
  for (const auto& f : rep.fixed_points) fps.push_back(json{{"m", f.m}, {"n", f.n}, {"residual", f.residual}});
  return json{{"fixed_points", fps},
              {"classification", to_string(rep.classification)},
              {"condition_epsilon_gt_eta", rep.condition_satisfied},
              {"limit_r", rep.limit_r},
              {"limit_rc", rep.limit_rc},
              {"limit_spread", rep.limit_spread}};
}

}  // namespace

MeanfieldOutput cmd_meanfield(const MeanfieldConfig& mf, const fs::path& out) {
  fs::create_directories(out);
  MeanfieldOutput result;
  json report;
  if (mf.model == MeanfieldConfig::Model::Sir) {
    result.trajectory = integrate_sir(mf.sir, mf.integration);
    report = json{{"model", "sir"},
                  {"beta", mf.sir.beta},
                  {"gamma", mf.sir.gamma},
                  {"r0", mf.sir.r0},
                  {"equilibrium", sir_equilibrium(mf.sir)},
                  {"final_r", result.trajectory->final_r()},
                  {"clamp_events", result.trajectory->clamp_events},
                  {"max_violation", result.trajectory->max_violation}};
  } else if (mf.mode == MeanfieldConfig::Mode::Grid) {
    result.grid = extinction_grid();
    std::string csv = "beta,epsilon,eta,r0,rc0,final_r,pass\n";
    std::size_t failures = 0;
    for (const auto& g : result.grid) {
      csv += format_real(g.beta) + "," + format_real(g.epsilon) + "," + format_real(g.eta) + "," +
             format_real(g.r0) + "," + format_real(g.rc0) + "," + format_real(g.final_r) + "," +
             (g.pass ? "1" : "0") + "\n";
      if (!g.pass) ++failures;
    }
    result.grid_pass = failures == 0;
    write_text(out / "grid.csv", csv);
    report = json{{"model", "cowpox"},
                  {"mode", "grid"},
                  {"points", result.grid.size()},
                  {"failures", failures},
                  {"result", result.grid_pass ? "PASS" : "FAIL"}};
  } else {
    const auto& p = mf.cowpox;
    if (mf.mode == MeanfieldConfig::Mode::Discrete) {
      result.trajectory = iterate_discrete(p, mf.rounds);
    } else {
      result.trajectory = integrate_cowpox(p, mf.integration);
    }
    result.report = stationary_analysis(p);
    report = report_json(*result.report);
    report["model"] = "cowpox";
    report["mode"] = mf.mode == MeanfieldConfig::Mode::Discrete ? "discrete" : "ode";
    report["params"] = json{{"beta", p.beta}, {"delta", p.delta}, {"epsilon", p.epsilon},
                            {"eta", p.eta},   {"r0", p.r0},       {"rc0", p.rc0}};
    report["final_r"] = result.trajectory->final_r();
    report["final_rc"] = result.trajectory->final_rc();
    report["clamp_events"] = result.trajectory->clamp_events;
  }
  if (result.trajectory) write_text(out / "trajectory.csv", trajectory_csv(*result.trajectory));
  write_text(out / "report.json", report.dump(2) + "\n");
  return result;
}

CompareOutput compare_logs(const std::vector<EventLog>& logs, std::uint32_t n_agents) {
  if (logs.empty()) throw std::invalid_argument("compare: no event logs");
  for (const auto& log : logs) {
    if (log.size() != logs.front().size()) throw std::invalid_argument("compare: event logs differ in length");
    if (log.empty()) throw std::invalid_argument("compare: empty event log");
  }

  CompareOutput out;
  std::vector<PairEvent> pooled;
  for (const auto& log : logs) {
    for (const auto& r : log) pooled.insert(pooled.end(), r.pairs.begin(), r.pairs.end());
  }
  out.estimates = estimate_params(pooled);

  const std::size_t T = logs.front().size();
  for (const auto& r : logs.front()) out.rounds.push_back(r.round);
  std::uint64_t infected_rounds = 0, self_recoveries = 0;
  bool any_cure = false;

  struct Curves {
    std::vector<double> sim_r, sim_rc, mf_r, mf_rc;
  };
  // Observed and predicted ratios of one replicate.
  auto replicate_curves = [&](const EventLog& log) {
    Curves c{std::vector<double>(T), std::vector<double>(T), std::vector<double>(T), std::vector<double>(T)};
    for (std::size_t t = 0; t < T; ++t) {
      const auto& agents = log[t].agents;
      if (agents.size() != n_agents) throw std::invalid_argument("compare: snapshot size differs from N");
      std::size_t i = 0, k = 0;
      for (std::size_t a = 0; a < agents.size(); ++a) {
        if (agents[a].state == Compartment::Infected) ++i;
        if (agents[a].state == Compartment::Cured) ++k;
        if (t > 0 && log[t - 1].agents[a].state == Compartment::Infected) {
          ++infected_rounds;
          if (agents[a].state == Compartment::Sensitive) ++self_recoveries;
        }
      }
      c.sim_r[t] = static_cast<double>(i) / n_agents;
      c.sim_rc[t] = static_cast<double>(k) / n_agents;
    }
    const auto anchor = std::find_if(c.sim_rc.begin(), c.sim_rc.end(), [](double v) { return v > 0.0; }) -
                        c.sim_rc.begin();
    if (static_cast<std::size_t>(anchor) < T) any_cure = true;

    const CowpoxParams p = out.estimates.to_params(c.sim_r[0], c.sim_rc[0]);
    double x = c.sim_r[0], y = c.sim_rc[0];
    for (std::size_t t = 0; t < T; ++t) {
      if (static_cast<std::ptrdiff_t>(t) == anchor) {
        x = c.sim_r[t];
        y = c.sim_rc[t];
      }
      c.mf_r[t] = x;
      c.mf_rc[t] = y;
      const auto next = cowpox_discrete_step(x, y, p);
      x = next.r;
      y = next.rc;
    }
    return c;
  };
  auto took_off = [](const EventLog& log) {
    for (const auto& r : log) {
      for (const auto& e : r.pairs) {
        if (e.a_state_before != Compartment::Infected && e.a_state_after == Compartment::Infected) return true;
      }
    }
    return false;
  };

  std::vector<Curves> per_rep;
  std::vector<bool> used;
  for (const auto& log : logs) {
    per_rep.push_back(replicate_curves(log));
    used.push_back(took_off(log));
  }
  const auto n_used = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
  if (n_used == 0) {
    used.assign(used.size(), true);
    out.warnings.push_back("no replicate took off: comparing every replicate");
  } else if (n_used < logs.size()) {
    out.warnings.push_back(std::to_string(logs.size() - n_used) + " of " + std::to_string(logs.size()) +
                           " replicates never transmitted the seeded infection and are excluded from the curves");
  }

  // Replicate-mean curves over the selected replicates and their L-infinity gaps.
  auto mean_of = [&](const std::vector<bool>& pick) {
    Curves m{std::vector<double>(T), std::vector<double>(T), std::vector<double>(T), std::vector<double>(T)};
    const double n = static_cast<double>(std::count(pick.begin(), pick.end(), true));
    for (std::size_t k = 0; k < per_rep.size(); ++k) {
      if (!pick[k]) continue;
      for (std::size_t t = 0; t < T; ++t) {
        m.sim_r[t] += per_rep[k].sim_r[t] / n;
        m.sim_rc[t] += per_rep[k].sim_rc[t] / n;
        m.mf_r[t] += per_rep[k].mf_r[t] / n;
        m.mf_rc[t] += per_rep[k].mf_rc[t] / n;
      }
    }
    return m;
  };
  auto linf = [](const std::vector<double>& a, const std::vector<double>& b) {
    double g = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) g = std::max(g, std::abs(a[t] - b[t]));
    return g;
  };
  const Curves all = mean_of(std::vector<bool>(logs.size(), true));
  Curves sel = mean_of(used);
  out.replicates_used = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));

  out.self_recovery =
      infected_rounds ? static_cast<double>(self_recoveries) / static_cast<double>(infected_rounds) : 0.0;
  out.gap_r = linf(sel.sim_r, sel.mf_r);
  out.gap_r_all = linf(all.sim_r, all.mf_r);
  out.sim_r = std::move(sel.sim_r);
  out.mf_r = std::move(sel.mf_r);
  if (any_cure) {
    out.gap_rc = linf(sel.sim_rc, sel.mf_rc);
    out.gap_rc_all = linf(all.sim_rc, all.mf_rc);
    out.sim_rc = std::move(sel.sim_rc);
    out.mf_rc = std::move(sel.mf_rc);
  } else {
    out.warnings.push_back("no cure events: comparing r(t) only");
  }

  if (n_agents < kSmallPopulation) {
    out.warnings.push_back("small population (N=" + std::to_string(n_agents) + " < " +
                           std::to_string(kSmallPopulation) +
                           "): the mean-field pair approximation is not expected to hold");
  }
  const std::pair<const char*, const RateEstimate*> named[] = {{"beta", &out.estimates.beta},
                                                               {"delta", &out.estimates.delta},
                                                               {"epsilon", &out.estimates.epsilon},
                                                               {"eta", &out.estimates.eta}};
  for (const auto& [name, est] : named) {
    if (!est->value()) out.warnings.push_back(std::string("no pairs to estimate ") + name + "; using 0");
  }
  return out;
}

CompareOutput cmd_compare(const fs::path& run_dir, const fs::path& out_dir) {
  const fs::path manifest_path = run_dir / "manifest.json";
  json manifest;
  try {
    manifest = json::parse(read_text(manifest_path));
  } catch (const json::exception& e) {
    throw std::runtime_error(manifest_path.string() + ": " + e.what());
  }
  const Scenario scenario = parse_scenario(read_text(manifest_path));

  std::vector<EventLog> logs;
  for (const auto& rep : manifest.at("replicates")) {
    if (!rep.contains("events")) {
      throw std::runtime_error("missing event log for replicate " + rep.at("index").dump() +
                               " (re-run with --events)");
    }
    const fs::path path = run_dir / rep.at("events").get<std::string>();
    if (!fs::exists(path)) throw std::runtime_error("missing event log " + path.string());
    logs.push_back(read_event_log(path));
  }
  CompareOutput out = compare_logs(logs, scenario.engine.n_agents);

  const fs::path dest = out_dir.empty() ? run_dir : out_dir;
  std::string csv = out.sim_rc ? "round,sim_r,mf_r,sim_rc,mf_rc\n" : "round,sim_r,mf_r\n";
  for (std::size_t t = 0; t < out.rounds.size(); ++t) {
    csv += std::to_string(out.rounds[t]) + "," + format_real(out.sim_r[t]) + "," + format_real(out.mf_r[t]);
    if (out.sim_rc) csv += "," + format_real((*out.sim_rc)[t]) + "," + format_real((*out.mf_rc)[t]);
    csv += "\n";
  }
  write_text(dest / "compare.csv", csv);

  auto rate = [](const RateEstimate& e) {
    return json{{"successes", e.successes},
                {"trials", e.trials},
                {"value", e.value() ? json(*e.value()) : json(nullptr)}};
  };
  json report{{"N", scenario.engine.n_agents},
              {"replicates", logs.size()},
              {"estimates",
               {{"beta", rate(out.estimates.beta)},
                {"delta", rate(out.estimates.delta)},
                {"epsilon", rate(out.estimates.epsilon)},
                {"eta", rate(out.estimates.eta)}}},
              {"self_recovery_rate", out.self_recovery},
              {"linf_gap_r", out.gap_r},
              {"linf_gap_rc", out.gap_rc ? json(*out.gap_rc) : json(nullptr)},
              {"replicates_used", out.replicates_used},
              {"linf_gap_r_all_replicates", out.gap_r_all},
              {"linf_gap_rc_all_replicates", out.gap_rc_all ? json(*out.gap_rc_all) : json(nullptr)},
              {"warnings", out.warnings}};
  write_text(dest / "compare.json", report.dump(2) + "\n");
  return out;
}

}  // namespace cowpox

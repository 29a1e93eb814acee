// Acceptance checks P1-P10. Prints one PASS/FAIL line per criterion and
// exits non-zero when any selected criterion fails.
//
//   acceptance            run every criterion
//   acceptance --only P5  run one criterion

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cowpox/commands.hpp"

namespace {

using namespace cowpox;
namespace fs = std::filesystem;

constexpr std::uint32_t kSeeds = 20;  // replicates per scenario, seeds 0..19

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario base_scenario() {
  Scenario s;
  s.engine.n_agents = 128;
  s.engine.rounds = 64;
  s.engine.kappa = 4;
  s.engine.p_path = 1.0;
  s.engine.attack.r0_count = 1;
  s.engine.defense.detector = DetectorParams::for_mode(DetectorMode::ThreeTurn);
  s.engine.defense.strategy.kind = CureStrategyKind::S1;
  s.engine.seed = 0;
  s.replicates = kSeeds;
  return s;
}

std::vector<MetricsTable> tables_of(const Scenario& s) {
  std::vector<MetricsTable> out;
  for (auto& r : run_replicates(s, 0, false)) out.push_back(std::move(r.metrics));
  return out;
}

std::vector<double> median_current(const std::vector<MetricsTable>& t) {
  return median_curve(t, &MetricsRow::current_rate);
}
std::vector<double> median_cumulative(const std::vector<MetricsTable>& t) {
  return median_curve(t, &MetricsRow::cumulative_rate);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// P1: baseline model threshold and equilibrium.
Verdict p1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto solve = [](double beta, double gamma, double r0) {
    const SirParams p{beta, gamma, r0};
    const Rhs<1> f = [p](const std::array<double, 1>& y) { return std::array<double, 1>{sir_rhs(y[0], p)}; };
    return integrate_rk4(f, r0, IntegrationOptions{0.1, 1000.0, 1000}).final_r();
  };
  const double up = solve(0.8, 0.2, 0.01);
  const double down = solve(0.3, 0.2, 0.5);
  const double secs = seconds_since(t0);
  const bool pass = std::abs(up - 0.5) <= 1e-3 && down < 1e-6 && secs < 1.0;
  return {pass, fmt("r(1e3)=%.6f for (0.8,0.2) [0.5 +- 1e-3]; r(1e3)=%.3g for (0.3,0.2) [< 1e-6]; %.3fs [< 1s]", up,
                    down, secs)};
}

// P2: extinction whenever curing outpaces re-infection.
Verdict p2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = extinction_grid(1e4, 0.1, 1e-3);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  std::size_t failures = 0;
  std::set<std::tuple<double, double, double>> cells;
  for (const auto& g : grid) {
    worst = std::max(worst, g.final_r);
    failures += !g.pass;
    cells.insert({g.beta, g.epsilon, g.eta});
  }
  const bool pass = failures == 0 && !grid.empty() && secs < 30.0;
  return {pass, fmt("%zu parameter cells x starts = %zu runs, max r(1e4)=%.3g [< 1e-3], %zu failing; %.1fs [< 30s]",
                    cells.size(), grid.size(), worst, failures, secs)};
}

// P3: stationary points of the continuous model.
Verdict p3() {
  double worst = 0.0;
  std::size_t checked = 0;
  const double levels[] = {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  for (double beta : levels) {
    for (double eps : levels) {
      for (double eta : levels) {
        const CowpoxParams p{beta, eps, eps, eta, 0.1, 0.05};
        for (auto [m, n] : {std::pair{0.0, 1.0}, std::pair{0.0, 0.0}, std::pair{1.0, 0.0}}) {
          const auto d = cowpox_rhs(m, n, p);
          worst = std::max({worst, std::abs(d[0]), std::abs(d[1])});
          ++checked;
        }
      }
    }
  }
  return {worst <= 1e-12, fmt("max |rhs| at (0,1), (0,0), (1,0) over %zu parameter points = %.3g [<= 1e-12]", checked,
                              worst)};
}

// P4: estimator recovers known transition probabilities.
Verdict p4() {
  using C = Compartment;
  const double truth[4] = {0.7, 0.5, 0.6, 0.3};
  const std::pair<C, C> kinds[4] = {{C::Infected, C::Sensitive}, {C::Cured, C::Sensitive}, {C::Cured, C::Infected},
                                    {C::Infected, C::Cured}};
  const C success[4] = {C::Infected, C::Cured, C::Cured, C::Infected};
  RandomStream rng(derive_seed(4, "acceptance"));
  std::vector<PairEvent> events;
  const int total = 100000;
  for (int i = 0; i < total; ++i) {
    const int k = i % 4;
    PairEvent e;
    e.q_state_before = kinds[k].first;
    e.a_state_before = kinds[k].second;
    e.a_state_after = rng.bernoulli(truth[k]) ? success[k] : kinds[k].second;
    events.push_back(e);
  }
  const auto est = estimate_params(events);
  const double got[4] = {*est.beta.value(), *est.delta.value(), *est.epsilon.value(), *est.eta.value()};
  bool pass = true;
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    worst = std::max(worst, std::abs(got[k] - truth[k]));
    pass &= std::abs(got[k] - truth[k]) <= 0.01;
  }
  return {pass, fmt("beta=%.4f delta=%.4f eps=%.4f eta=%.4f from %d events; max error %.4f [<= 0.01]", got[0], got[1],
                    got[2], got[3], total, worst)};
}

// P5: agent-based run against the mean-field prediction.
Verdict p5() {
  const auto t0 = std::chrono::steady_clock::now();
  Scenario s = base_scenario();
  s.engine.n_agents = 1024;
  s.engine.kappa = 32;
  s.engine.defense.strategy.kind = CureStrategyKind::S2;
  const fs::path dir = fs::temp_directory_path() / "cowpox_acceptance_p5";
  fs::remove_all(dir);
  s.output_dir = dir.string();
  cmd_run(s, RunOptions{dir, true, 0});
  const auto cmp = cmd_compare(dir);
  fs::remove_all(dir);
  const double secs = seconds_since(t0);
  const bool pass = cmp.gap_r <= 0.10 && secs < 120.0;
  return {pass, fmt("N=1024 kappa=32, %zu of %u replicates took off: L-inf gap r=%.4f [<= 0.10], rc=%.4f; "
                    "all replicates r=%.4f; %.1fs [< 120s]",
                    cmp.replicates_used, kSeeds, cmp.gap_r, cmp.gap_rc.value_or(-1.0), cmp.gap_r_all, secs)};
}

// P6: unchecked spread saturates.
Verdict p6() {
  Scenario s = base_scenario();
  s.engine.kappa = 0;
  const auto t = tables_of(s);
  const auto cum = median_cumulative(t);
  const auto cur = median_current(t);
  std::optional<std::size_t> reach;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    if (cum[i] >= 0.95) {
      reach = i;
      break;
    }
  }
  const std::size_t peak = argmax(cur);
  std::optional<std::size_t> recovered;
  for (std::size_t i = peak + 1; i < cur.size(); ++i) {
    if (cur[i] < 0.10) {
      recovered = i;
      break;
    }
  }
  const bool pass = reach && *reach >= 18 && *reach <= 40 && !recovered;
  return {pass, fmt("median cumulative >= 0.95 at round %s [18..40]; median current after its peak %s [never < 0.10]",
                    reach ? std::to_string(*reach).c_str() : "never",
                    recovered ? ("drops below 0.10 at round " + std::to_string(*recovered)).c_str() : "stays >= 0.10")};
}

// P7: defended run recovers behind an immune barrier.
Verdict p7() {
  const auto t = tables_of(base_scenario());
  const double at50 = median_current(t)[50];
  std::vector<double> finals;
  for (const auto& tab : t) finals.push_back(tab.back().cumulative_rate);
  const double final_cum = median_of(finals);
  const bool pass = at50 <= 0.10 && final_cum <= 0.97;
  return {pass, fmt("median current at round 50 = %.4f [<= 0.10]; median final cumulative = %.4f [<= 0.97]", at50,
                    final_cum)};
}

// P8: ablations over kappa, album size and patient-zero count.
Verdict p8() {
  std::string detail;
  bool pass = true;

  // (a) peak height falls with more Cowpox agents.
  std::vector<double> peaks;
  for (std::uint32_t kappa : {1u, 2u, 4u, 8u, 16u}) {
    Scenario s = base_scenario();
    s.engine.kappa = kappa;
    const auto cur = median_current(tables_of(s));
    peaks.push_back(*std::max_element(cur.begin(), cur.end()));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < peaks.size(); ++i) monotone &= peaks[i] <= peaks[i - 1];
  const double ratio = peaks.back() / peaks.front();
  const bool a = monotone && ratio <= 0.6;
  detail += fmt("(a) %s: kappa 1/2/4/8/16 peaks %.3f/%.3f/%.3f/%.3f/%.3f, non-increasing=%s, ratio %.3f [<= 0.6]; ",
                a ? "pass" : "FAIL", peaks[0], peaks[1], peaks[2], peaks[3], peaks[4], monotone ? "yes" : "no", ratio);

  // (b) final cumulative rate against album size, cures from the benign bank.
  std::vector<double> finals;
  for (std::uint32_t album : {5u, 10u, 15u}) {
    Scenario s = base_scenario();
    s.engine.album_capacity = album;
    s.engine.defense.strategy.kind = CureStrategyKind::S2;
    const auto cum = median_cumulative(tables_of(s));
    finals.push_back(cum.back());
  }
  const bool b = finals[1] >= finals[0] && finals[2] >= finals[1];
  detail += fmt("(b) %s: album 5/10/15 final cumulative %.3f/%.3f/%.3f [non-decreasing]; ", b ? "pass" : "FAIL",
                finals[0], finals[1], finals[2]);

  // (c) more patient zeros move the peak earlier without changing its height much.
  std::vector<double> heights;
  std::vector<std::size_t> rounds;
  for (std::uint32_t r0 : {1u, 4u, 16u}) {
    Scenario s = base_scenario();
    s.engine.attack.r0_count = r0;
    const auto cur = median_current(tables_of(s));
    rounds.push_back(argmax(cur));
    heights.push_back(cur[rounds.back()]);
  }
  const bool earlier = rounds[1] < rounds[0] && rounds[2] < rounds[1];
  const double spread = *std::max_element(heights.begin(), heights.end()) - *std::min_element(heights.begin(), heights.end());
  const bool c = earlier && spread <= 0.1;
  detail += fmt("(c) %s: r0 1/4/16 peaks %.3f@%zu/%.3f@%zu/%.3f@%zu, earlier=%s, height change %.3f [<= 0.1]",
                c ? "pass" : "FAIL", heights[0], rounds[0], heights[1], rounds[1], heights[2], rounds[2],
                earlier ? "yes" : "no", spread);

  pass = a && b && c;
  return {pass, detail};
}

// P9: adaptive attack after the first wave.
Verdict p9() {
  auto scenario = [](double p_feasible) {
    Scenario s = base_scenario();
    s.engine.rounds = 128;
    s.engine.defense.strategy.kind = CureStrategyKind::S2;
    s.engine.attack.adaptive = AdaptiveConfig{65, p_feasible, 0.01};
    return s;
  };
  const std::uint32_t trigger = 65;

  const auto half = tables_of(scenario(0.5));
  std::vector<double> first, second;
  for (const auto& tab : half) {
    double f = 0.0, g = 0.0;
    for (const auto& row : tab) (row.round < trigger ? f : g) = std::max(row.round < trigger ? f : g, row.current_rate);
    first.push_back(f);
    second.push_back(g);
  }
  const double m_first = median_of(first);
  const double m_second = median_of(second);

  const auto none = median_current(tables_of(scenario(0.0)));
  double after = 0.0;
  for (std::size_t t = trigger; t < none.size(); ++t) after = std::max(after, none[t]);

  const bool pass = m_second < m_first && after <= 0.10;
  return {pass, fmt("p_feasible=0.5: median first peak %.4f, median second peak %.4f [second < first]; "
                    "p_feasible=0: max median current from round %u = %.4f [<= 0.10, no second peak]",
                    m_first, m_second, trigger, after)};
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// P10: determinism and invariants.
Verdict p10() {
  std::vector<std::string> problems;

  // Byte-identical outputs for one seed.
  const fs::path a = fs::temp_directory_path() / "cowpox_acceptance_p10a";
  const fs::path b = fs::temp_directory_path() / "cowpox_acceptance_p10b";
  fs::remove_all(a);
  fs::remove_all(b);
  Scenario s = base_scenario();
  s.replicates = 3;
  s.engine.seed = 7;
  cmd_run(s, RunOptions{a, true, 1});
  cmd_run(s, RunOptions{b, true, 0});
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;  // carries wall-clock time
    ++files;
    if (read_bytes(a / name) != read_bytes(b / name)) problems.push_back("differing " + name.string());
  }
  fs::remove_all(a);
  fs::remove_all(b);

  // Invariants over randomised configurations.
  RandomStream rng(derive_seed(10, "acceptance"));
  std::size_t rounds_checked = 0, cures_checked = 0;
  for (int k = 0; k < 16; ++k) {
    EngineConfig c;
    c.n_agents = 2 * static_cast<std::uint32_t>(8 + rng.below(57));
    c.rounds = 48;
    c.album_capacity = 1 + static_cast<std::uint32_t>(rng.below(15));
    c.history_capacity = 1 + static_cast<std::uint32_t>(rng.below(5));
    c.kappa = static_cast<std::uint32_t>(rng.below(c.n_agents / 8 + 1));
    c.attack.r0_count = 1 + static_cast<std::uint32_t>(rng.below(4));
    c.defense.strategy.kind = k % 2 ? CureStrategyKind::S2 : CureStrategyKind::S1;
    c.seed = rng.next_u64();
    SimState st = initialize(c);
    double last = st.metrics.back().cumulative_rate;
    while (st.round < c.rounds) {
      std::vector<std::set<Strain>> held(st.agents.size());
      for (const auto& ag : st.agents) {
        for (const auto& item : ag.album.items()) {
          if (item.is_cure()) held[ag.id].insert(*item.strain());
        }
      }
      step(st, c);
      ++rounds_checked;
      for (const auto& e : st.log.back().pairs) {
        if (e.question.malicious && held[e.questioner].count(*e.question.malicious)) problems.push_back("immune barrier");
        if (e.answer.malicious && held[e.questioner].count(*e.answer.malicious)) problems.push_back("immune barrier");
      }
      std::uint32_t partition = 0;
      for (const auto& ag : st.agents) {
        if (ag.album.size() > c.album_capacity) problems.push_back("album bound");
        if (ag.history.size() > c.history_capacity) problems.push_back("history bound");
        const auto comp = classify(ag);
        partition += comp == Compartment::Sensitive || comp == Compartment::Infected || comp == Compartment::Cured;
      }
      if (partition != c.n_agents) problems.push_back("compartment partition");
      if (st.metrics.back().cumulative_rate < last) problems.push_back("cumulative monotonicity");
      last = st.metrics.back().cumulative_rate;
    }
    for (const auto& [id, sample] : st.registry) {
      if (const auto* cure = std::get_if<Cure>(&sample.kind)) {
        ++cures_checked;
        const auto ctx = QueryContext::of_strain(cure->targets_strain);
        if (!(score(sample, ctx) > score(st.registry.at(cure->target), ctx))) problems.push_back("cure dominance");
      }
    }
    if (metrics_from_log(st.log) != st.metrics) problems.push_back("log replay");
  }

  // RK4 step halving.
  double halving = 0.0;
  for (const SirParams& p : {SirParams{0.8, 0.2, 0.01}, SirParams{0.5, 0.1, 0.2}, SirParams{0.3, 0.2, 0.5}}) {
    halving = std::max(halving, std::abs(integrate_sir(p, {0.1, 50.0, 1000}).final_r() -
                                         integrate_sir(p, {0.05, 50.0, 1000}).final_r()));
  }
  if (halving >= 1e-8) problems.push_back("rk4 step halving");

  std::sort(problems.begin(), problems.end());
  problems.erase(std::unique(problems.begin(), problems.end()), problems.end());
  std::string list;
  for (const auto& p : problems) list += (list.empty() ? "" : ", ") + p;
  return {problems.empty(),
          fmt("%zu artifact files byte-identical across runs; %zu rounds and %zu cures audited; RK4 halving diff %.2g "
              "[< 1e-8]; violations: %s",
              files, rounds_checked, cures_checked, halving, list.empty() ? "none" : list.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"P1", p1}, {"P2", p2}, {"P3", p3}, {"P4", p4}, {"P5", p5},
      {"P6", p6}, {"P7", p7}, {"P8", p8}, {"P9", p9}, {"P10", p10}};

  std::optional<std::string> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--only P<n>]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0, ran = 0;
  for (const auto& [id, check] : criteria) {
    if (only && *only != id) continue;
    ++ran;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %s: %s\n", id.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion %s\n", only->c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
